use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::fracops::{Series, MIN_MODEL_LEN};

/// Water supply production capacity, 10⁴ m³/day, 2004–2019.
const HENAN: [f64; 16] = [
    1038.31, 1026.51, 1023.7, 1039.85, 1013.91, 1007.79, 1010.34, 1037.56, 1042.31, 1047.26, 1083.62, 1121.39, 1180.32,
    1150.37, 1166.64, 1281.52,
];

const CHONGQING: [f64; 16] = [
    373.65, 405.61, 391.7, 419.2, 418.16, 420.35, 412.3, 429.27, 447.83, 491.22, 506.89, 529.92, 566.12, 599.87,
    616.99, 627.76,
];

pub const BUILTIN_NAMES: [&str; 2] = ["case1_henan", "case2_chongqing"];

/// A series with a train/holdout split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseDataset {
    pub name: String,
    pub values: Series,
    pub train_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CaseDataset {
    pub fn new(name: impl Into<String>, values: Series, train_len: usize, labels: Option<Vec<String>>) -> Result<Self> {
        if train_len < MIN_MODEL_LEN {
            return Err(GreyError::InvalidConfig(format!(
                "train length {train_len} is below the minimum of {MIN_MODEL_LEN}"
            )));
        }
        if train_len >= values.len() {
            return Err(GreyError::InvalidConfig(format!(
                "train length {train_len} leaves no holdout among {} observations",
                values.len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != values.len() {
                return Err(GreyError::InvalidConfig("label count differs from value count".into()));
            }
        }
        Ok(CaseDataset {
            name: name.into(),
            values,
            train_len,
            labels,
        })
    }

    pub fn train(&self) -> Series {
        Series::new(self.values.values()[..self.train_len].to_vec())
    }

    pub fn holdout(&self) -> &[f64] {
        &self.values.values()[self.train_len..]
    }
}

/// Built-in case studies; `case1`/`case2` are accepted as short names.
pub fn builtin_dataset(name: &str) -> Result<CaseDataset> {
    let (full, values) = match name {
        "case1_henan" | "case1" => ("case1_henan", HENAN),
        "case2_chongqing" | "case2" => ("case2_chongqing", CHONGQING),
        other => return Err(GreyError::UnknownDataset(other.to_string())),
    };
    let labels = (2004..2020).map(|y| y.to_string()).collect();
    CaseDataset::new(full, Series::new(values.to_vec()), 12, Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embeds_are_bit_exact() {
        let henan = "1038.31 1026.51 1023.7 1039.85 1013.91 1007.79 1010.34 1037.56 1042.31 1047.26 1083.62 \
                     1121.39 1180.32 1150.37 1166.64 1281.52";
        let chongqing = "373.65 405.61 391.7 419.2 418.16 420.35 412.3 429.27 447.83 491.22 506.89 529.92 \
                         566.12 599.87 616.99 627.76";
        for (name, text) in [("case1_henan", henan), ("case2_chongqing", chongqing)] {
            let ds = builtin_dataset(name).unwrap();
            let parsed: Vec<u64> = text
                .split_whitespace()
                .map(|t| t.parse::<f64>().unwrap().to_bits())
                .collect();
            let embedded: Vec<u64> = ds.values.values().iter().map(|v| v.to_bits()).collect();
            assert_eq!(parsed, embedded, "{name}");
        }
    }

    #[test]
    fn shapes_and_anchors() {
        let c1 = builtin_dataset("case1_henan").unwrap();
        assert_eq!(c1.values.values()[0], 1038.31);
        assert_eq!(c1.values.len(), 16);
        assert_eq!(c1.train_len, 12);
        assert_eq!(c1.holdout().len(), 4);
        let c2 = builtin_dataset("case2").unwrap();
        assert_eq!(c2.name, "case2_chongqing");
        assert_eq!(*c2.holdout().last().unwrap(), 627.76);
        assert_eq!(c2.labels.as_ref().unwrap()[11], "2015");
        assert!(matches!(builtin_dataset("case3"), Err(GreyError::UnknownDataset(_))));
    }

    #[test]
    fn constructor_checks() {
        let s = Series::new(vec![1.0; 6]);
        assert!(CaseDataset::new("x", s.clone(), 3, None).is_err());
        assert!(CaseDataset::new("x", s.clone(), 7, None).is_err());
        assert!(CaseDataset::new("x", s.clone(), 6, None).is_err());
        assert!(CaseDataset::new("x", s.clone(), 5, None).is_ok());
        assert!(CaseDataset::new("x", s, 4, Some(vec!["a".into()])).is_err());
    }
}
