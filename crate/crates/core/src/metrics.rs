//! Forecast accuracy metrics and Lewis-scale grading.
//!
//! In-sample scoring skips the first point, which every grey model pins to
//! the observed value. Out-of-sample scoring uses every holdout point.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {actual} actual vs {predicted} predicted values")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("no points left to score")]
    Empty,
    #[error("actual value at position {0} is zero")]
    DivisionByZero(usize),
    #[error("MAPE must be non-negative, got {0}")]
    NegativeMape(f64),
}

fn scored<'a>(
    actual: &'a [f64],
    predicted: &'a [f64],
    skip_first: bool,
) -> Result<impl Iterator<Item = (usize, f64, f64)> + 'a, MetricsError> {
    if actual.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    let skip = usize::from(skip_first);
    if actual.len() <= skip {
        return Err(MetricsError::Empty);
    }
    Ok(actual
        .iter()
        .zip(predicted)
        .enumerate()
        .skip(skip)
        .map(|(i, (a, p))| (i, *a, *p)))
}

/// Mean absolute percentage error, in percent.
pub fn mape(actual: &[f64], predicted: &[f64], skip_first: bool) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    let mut m = 0usize;
    for (i, a, p) in scored(actual, predicted, skip_first)? {
        if a == 0.0 {
            return Err(MetricsError::DivisionByZero(i + 1));
        }
        sum += ((p - a) / a).abs();
        m += 1;
    }
    Ok(100.0 * sum / m as f64)
}

/// Mean squared error.
pub fn mse(actual: &[f64], predicted: &[f64], skip_first: bool) -> Result<f64, MetricsError> {
    let (sum, m) =
        scored(actual, predicted, skip_first)?.fold((0.0, 0usize), |(s, m), (_, a, p)| (s + (p - a) * (p - a), m + 1));
    Ok(sum / m as f64)
}

/// Mean absolute error.
pub fn mae(actual: &[f64], predicted: &[f64], skip_first: bool) -> Result<f64, MetricsError> {
    let (sum, m) =
        scored(actual, predicted, skip_first)?.fold((0.0, 0usize), |(s, m), (_, a, p)| (s + (p - a).abs(), m + 1));
    Ok(sum / m as f64)
}

/// MAPE, MSE and MAE over one set of scored points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBlock {
    pub mape: f64,
    pub mse: f64,
    pub mae: f64,
    pub count: usize,
}

impl MetricBlock {
    pub fn compute(actual: &[f64], predicted: &[f64], skip_first: bool) -> Result<Self, MetricsError> {
        Ok(MetricBlock {
            mape: mape(actual, predicted, skip_first)?,
            mse: mse(actual, predicted, skip_first)?,
            mae: mae(actual, predicted, skip_first)?,
            count: actual.len() - usize::from(skip_first),
        })
    }

    /// In-sample convention: the pinned first point is not scored.
    pub fn in_sample(actual: &[f64], fitted: &[f64]) -> Result<Self, MetricsError> {
        Self::compute(actual, fitted, true)
    }

    pub fn out_of_sample(actual: &[f64], forecast: &[f64]) -> Result<Self, MetricsError> {
        Self::compute(actual, forecast, false)
    }
}

/// Lewis accuracy bands for MAPE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LewisGrade {
    /// MAPE below 10 %.
    High,
    /// 10 % to 20 %.
    Good,
    /// 20 % to 50 %.
    Reasonable,
    /// 50 % and above.
    Inaccurate,
}

impl fmt::Display for LewisGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LewisGrade::High => "high",
            LewisGrade::Good => "good",
            LewisGrade::Reasonable => "reasonable",
            LewisGrade::Inaccurate => "inaccurate",
        };
        f.write_str(s)
    }
}

pub fn lewis_grade(mape_percent: f64) -> Result<LewisGrade, MetricsError> {
    if !(mape_percent >= 0.0) {
        return Err(MetricsError::NegativeMape(mape_percent));
    }
    Ok(if mape_percent < 10.0 {
        LewisGrade::High
    } else if mape_percent < 20.0 {
        LewisGrade::Good
    } else if mape_percent < 50.0 {
        LewisGrade::Reasonable
    } else {
        LewisGrade::Inaccurate
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_sequences_score_zero() {
        let x = [3.0, 4.0, 5.0];
        assert_eq!(mape(&x, &x, false).unwrap(), 0.0);
        assert_eq!(mse(&x, &x, true).unwrap(), 0.0);
        assert_eq!(mae(&x, &x, false).unwrap(), 0.0);
    }

    #[test]
    fn hand_arithmetic() {
        assert!((mape(&[100.0], &[110.0], false).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(mse(&[1.0, 2.0], &[2.0, 4.0], false).unwrap(), 2.5);
        assert_eq!(mae(&[1.0, 2.0], &[2.0, 4.0], false).unwrap(), 1.5);
    }

    #[test]
    fn skip_first_ignores_pinned_point() {
        let a = [10.0, 20.0];
        let p = [1000.0, 22.0];
        assert!((mape(&a, &p, true).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(MetricBlock::in_sample(&a, &p).unwrap().count, 1);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            mape(&[1.0], &[1.0, 2.0], false),
            Err(MetricsError::LengthMismatch { .. })
        ));
        assert_eq!(
            mape(&[1.0, 0.0], &[1.0, 1.0], false),
            Err(MetricsError::DivisionByZero(2))
        );
        // a zero in the skipped slot is fine
        assert!(mape(&[0.0, 2.0], &[1.0, 1.0], true).is_ok());
        assert_eq!(mae(&[1.0], &[1.0], true), Err(MetricsError::Empty));
        assert!(mse(&[], &[], false).is_err());
    }

    /// Per-point errors of the GM(1,1) column for Henan, k = 2..12, as printed.
    #[test]
    fn printed_gm_errors_average_with_skip_first() {
        let errors = [
            2.222092, 1.240598, 2.062798, 1.182551, 2.541204, 3.034622, 1.064035, 1.342211, 1.608006, 1.08156, 3.717707,
        ];
        let eleven = errors.iter().sum::<f64>() / 11.0;
        let twelve = errors.iter().sum::<f64>() / 12.0;
        assert!((eleven - 1.9183).abs() < 1e-3);
        assert!((twelve - 1.758).abs() < 1e-3);
    }

    #[test]
    fn lewis_bands() {
        assert_eq!(lewis_grade(2.87).unwrap(), LewisGrade::High);
        assert_eq!(lewis_grade(0.0).unwrap(), LewisGrade::High);
        assert_eq!(lewis_grade(10.0).unwrap(), LewisGrade::Good);
        assert_eq!(lewis_grade(20.0).unwrap(), LewisGrade::Reasonable);
        assert_eq!(lewis_grade(49.99).unwrap(), LewisGrade::Reasonable);
        assert_eq!(lewis_grade(55.0).unwrap(), LewisGrade::Inaccurate);
        assert!(lewis_grade(-0.1).is_err());
        assert!(lewis_grade(f64::NAN).is_err());
    }

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..20).prop_flat_map(|n| {
            (
                prop::collection::vec(0.1f64..100.0, n),
                prop::collection::vec(0.1f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn mape_is_scale_invariant((a, p) in pairs(), lambda in 0.01f64..1000.0) {
            let base = mape(&a, &p, true).unwrap();
            let sa: Vec<f64> = a.iter().map(|v| v * lambda).collect();
            let sp: Vec<f64> = p.iter().map(|v| v * lambda).collect();
            let scaled = mape(&sa, &sp, true).unwrap();
            prop_assert!((base - scaled).abs() <= 1e-9 * base.max(1.0));
        }

        #[test]
        fn mae_squared_bounded_by_mse((a, p) in pairs(), skip in any::<bool>()) {
            let m = mae(&a, &p, skip).unwrap();
            let s = mse(&a, &p, skip).unwrap();
            prop_assert!(m * m <= s * (1.0 + 1e-12));
        }

        #[test]
        fn metrics_nonnegative_and_zero_only_on_identity((a, p) in pairs()) {
            let block = MetricBlock::compute(&a, &p, false).unwrap();
            prop_assert!(block.mape >= 0.0 && block.mse >= 0.0 && block.mae >= 0.0);
            let same = a != p;
            prop_assert_eq!(block.mae > 0.0, same);
            prop_assert_eq!(block.mse > 0.0, same);
            prop_assert_eq!(block.mape > 0.0, same);
        }
    }
}
