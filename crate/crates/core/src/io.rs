//! Series input and report serialization helpers.

use std::path::Path;

use crate::error::{GreyError, Result};
use crate::fracops::Series;

/// A parsed input file: values with optional period labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub labels: Option<Vec<String>>,
    pub values: Series,
}

/// Parses CSV text with one `value` column or `label,value` columns and an
/// optional header row.
pub fn parse_series_csv(text: &str) -> Result<LabeledSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut width = None;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| GreyError::InvalidSeries(format!("malformed CSV: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let cols = record.len();
        if cols == 0 || cols > 2 {
            return Err(GreyError::InvalidSeries(format!(
                "line {}: expected `value` or `label,value`, found {cols} fields",
                line + 1
            )));
        }
        let field = &record[cols - 1];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                if width.is_some_and(|w| w != cols) {
                    return Err(GreyError::InvalidSeries(format!(
                        "line {}: inconsistent column count",
                        line + 1
                    )));
                }
                width = Some(cols);
                if cols == 2 {
                    labels.push(record[0].to_string());
                }
                values.push(v);
            }
            _ if values.is_empty() && width.is_none() && line == 0 => {
                // header row
            }
            _ => {
                return Err(GreyError::InvalidSeries(format!(
                    "line {}: `{field}` is not a finite number",
                    line + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(GreyError::InvalidSeries("input contains no observations".into()));
    }
    Ok(LabeledSeries {
        labels: (width == Some(2)).then_some(labels),
        values: Series::new(values),
    })
}

pub fn read_series_csv(path: &Path) -> Result<LabeledSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GreyError::InvalidSeries(format!("cannot read {}: {e}", path.display())))?;
    parse_series_csv(&text)
}

/// Serde adapter writing non-finite floats as the strings `inf`, `-inf`, `nan`.
pub mod float_or_tag {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Repr {
        Num(f64),
        Tag(String),
    }

    pub(crate) fn to_repr(v: f64) -> Repr {
        if v.is_finite() {
            Repr::Num(v)
        } else if v.is_nan() {
            Repr::Tag("nan".into())
        } else if v > 0.0 {
            Repr::Tag("inf".into())
        } else {
            Repr::Tag("-inf".into())
        }
    }

    pub(crate) fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Tag(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("unexpected float tag `{other}`"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

/// [`float_or_tag`] for vectors.
pub mod floats_or_tags {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::float_or_tag::{from_repr, to_repr, Repr};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| to_repr(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}
