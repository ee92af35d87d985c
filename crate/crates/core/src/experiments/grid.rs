use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::fracops::Series;
use crate::metrics::mape;
use crate::models::{restore_ufgm, ExponentialKernel, HyperParams, StructuralParams};

/// Inclusive arithmetic range `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
            return Err(GreyError::InvalidConfig(format!(
                "grid range {start}:{stop}:{step} needs finite bounds, start <= stop and step > 0"
            )));
        }
        Ok(GridRange { start, stop, step })
    }

    pub fn single(value: f64) -> Self {
        GridRange {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    /// Points are computed as `start + i·step`, never accumulated.
    pub fn values(&self) -> Vec<f64> {
        let slack = 1e-9 * self.step;
        (0..)
            .map(|i| self.start + i as f64 * self.step)
            .take_while(|v| *v <= self.stop + slack)
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = GreyError;

    /// `start:stop:step`, or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| GreyError::InvalidConfig(format!("`{t}` in grid range `{s}` is not a number")))
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                if !v.is_finite() {
                    return Err(GreyError::InvalidConfig(format!("grid value `{s}` is not finite")));
                }
                Ok(GridRange::single(v))
            }
            [a, b, c] => GridRange::new(num(a)?, num(b)?, num(c)?),
            _ => Err(GreyError::InvalidConfig(format!(
                "grid range `{s}` must be `start:stop:step` or a single value"
            ))),
        }
    }
}

/// Axes of the sensitivity grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub initial: GridRange,
    pub alpha: GridRange,
    pub r: GridRange,
    pub a: GridRange,
    pub b: GridRange,
    pub c: GridRange,
}

impl Default for GridSpec {
    /// Initial values 1, 200001, 400001, 600001 and `{0.1, 0.3, 0.5, 0.7, 0.9}`
    /// for every other axis: 12500 tuples.
    fn default() -> Self {
        let unit = GridRange {
            start: 0.1,
            stop: 1.0,
            step: 0.2,
        };
        GridSpec {
            initial: GridRange {
                start: 1.0,
                stop: 800_000.0,
                step: 200_000.0,
            },
            alpha: unit,
            r: unit,
            a: unit,
            b: unit,
            c: unit,
        }
    }
}

impl GridSpec {
    pub fn size(&self) -> usize {
        [self.initial, self.alpha, self.r, self.a, self.b, self.c]
            .iter()
            .map(|g| g.values().len())
            .product()
    }
}

/// One grid tuple and its in-sample MAPE, or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub initial_value: f64,
    pub alpha: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub mape: Option<f64>,
    pub failure: Option<String>,
}

impl GridRecord {
    pub fn is_failure(&self) -> bool {
        self.mape.is_none()
    }
}

fn evaluate_tuple(train: &Series, t: [f64; 6]) -> GridRecord {
    let [initial_value, alpha, r, a, b, c] = t;
    let outcome = (|| -> Result<f64> {
        let hyper = HyperParams::new(r, alpha)?;
        let params = StructuralParams { a, b, c };
        let restored = restore_ufgm(
            &ExponentialKernel::default(),
            &params,
            &hyper,
            initial_value,
            train.len(),
        )?;
        let m = mape(train.values(), &restored, true)?;
        if !m.is_finite() {
            return Err(GreyError::NonFinite(format!("MAPE is {m}")));
        }
        Ok(m)
    })();
    let (mape, failure) = match outcome {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e.to_string())),
    };
    GridRecord {
        initial_value,
        alpha,
        r,
        a,
        b,
        c,
        mape,
        failure,
    }
}

/// Evaluates the kernel model with `(a, b, c)` and the initial accumulated
/// value taken from the grid instead of estimated.
///
/// Rows follow the nesting initial value → alpha → r → a → b → c.
pub fn grid_search_effects(train: &Series, spec: &GridSpec) -> Result<Vec<GridRecord>> {
    train.check_modeling()?;
    let axes = [spec.initial, spec.alpha, spec.r, spec.a, spec.b, spec.c].map(|g| g.values());
    if axes.iter().any(Vec::is_empty) {
        return Err(GreyError::InvalidConfig(
            "every grid axis needs at least one value".into(),
        ));
    }
    let mut tuples = Vec::with_capacity(spec.size());
    for &iv in &axes[0] {
        for &al in &axes[1] {
            for &r in &axes[2] {
                for &a in &axes[3] {
                    for &b in &axes[4] {
                        for &c in &axes[5] {
                            tuples.push([iv, al, r, a, b, c]);
                        }
                    }
                }
            }
        }
    }
    Ok(tuples.into_par_iter().map(|t| evaluate_tuple(train, t)).collect())
}

/// CSV with columns `initial_value,alpha,r,a,b,c,mape,status`.
pub fn grid_csv(records: &[GridRecord]) -> String {
    let mut out = String::from("initial_value,alpha,r,a,b,c,mape,status\n");
    for rec in records {
        let (m, status) = match (&rec.mape, &rec.failure) {
            (Some(m), _) => (m.to_string(), "ok".to_string()),
            (None, Some(f)) => (String::new(), format!("failed: {}", f.replace(',', ";"))),
            (None, None) => (String::new(), "failed".to_string()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{m},{status}",
            rec.initial_value, rec.alpha, rec.r, rec.a, rec.b, rec.c
        );
    }
    out
}
