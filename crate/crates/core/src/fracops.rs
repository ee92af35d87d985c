//! Fractional accumulation operators.
//!
//! The order-`α` accumulation of a series `x` is
//!
//! ```text
//! x⁽ᵅ⁾(k) = Σ_{i=1..k} C(α, k−i) · x(i),   C(α, j) = Π_{m=0..j−1} (α + m) / (m + 1)
//! ```
//!
//! Order 1 is the running sum, order 0 the identity and order −1 the first
//! difference. Orders compose additively, so the inverse of an order-`α`
//! accumulation is the order-`−α` one.
//!
//! Nothing here validates the input; positivity and minimum-length checks
//! happen where a model is fitted.

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};

/// Minimum number of observations a grey model is fitted on.
pub const MIN_MODEL_LEN: usize = 4;

/// A raw, uniformly spaced observation sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Self {
        Series(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Splits into `(train, holdout)` at `train_len`.
    pub fn split(&self, train_len: usize) -> Result<(Series, Series)> {
        if train_len > self.len() {
            return Err(GreyError::InvalidConfig(format!(
                "train length {train_len} exceeds series length {}",
                self.len()
            )));
        }
        let (a, b) = self.0.split_at(train_len);
        Ok((Series(a.to_vec()), Series(b.to_vec())))
    }

    /// Checks the preconditions every model fit relies on: at least
    /// [`MIN_MODEL_LEN`] points, all finite and strictly positive.
    pub fn check_modeling(&self) -> Result<()> {
        if self.len() < MIN_MODEL_LEN {
            return Err(GreyError::InvalidSeries(format!(
                "need at least {MIN_MODEL_LEN} observations, got {}",
                self.len()
            )));
        }
        if let Some((i, v)) = self.0.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
            return Err(GreyError::InvalidSeries(format!(
                "observation {} is {v}; values must be finite and strictly positive",
                i + 1
            )));
        }
        Ok(())
    }
}

impl From<Vec<f64>> for Series {
    fn from(values: Vec<f64>) -> Self {
        Series(values)
    }
}

impl AsRef<[f64]> for Series {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A series after fractional accumulation, tagged with the order applied.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedSeries {
    values: Vec<f64>,
    order: f64,
}

impl AccumulatedSeries {
    pub fn new(values: Vec<f64>, order: f64) -> Self {
        AccumulatedSeries { values, order }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Generalized binomial coefficient `C(order, j) = Π_{i<j} (order + i)/(i + 1)`.
///
/// Total for every real `order`; `j = 0` gives the empty product 1.
pub fn gen_binomial(order: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (order + i as f64) / (i as f64 + 1.0))
}

/// The first `len` coefficients `C(order, 0..len)`, built incrementally.
pub fn binomial_weights(order: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    let mut c = 1.0;
    for j in 0..len {
        if j > 0 {
            c *= (order + (j - 1) as f64) / j as f64;
        }
        w.push(c);
    }
    w
}

fn accumulate(x: &[f64], order: f64) -> Vec<f64> {
    // Exact shortcuts keep orders 0 and 1 free of rounding.
    if order == 0.0 {
        return x.to_vec();
    }
    if order == 1.0 {
        return x
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
    }
    let w = binomial_weights(order, x.len());
    (0..x.len()).map(|k| (0..=k).map(|i| w[k - i] * x[i]).sum()).collect()
}

/// Order-`order` fractional accumulation of `x`.
pub fn fago(x: &[f64], order: f64) -> AccumulatedSeries {
    AccumulatedSeries::new(accumulate(x, order), order)
}

/// Restores the raw series from an order-`order` accumulation.
///
/// ```text
/// x(k) = Σ_{i=1..k} C(−order, k−i)·xa(i)
/// ```
///
/// This equals the order-`(1 − order)` accumulation followed by a first
/// difference. For `order = 1` it is the plain first difference.
pub fn ifago(xa: &[f64], order: f64) -> Vec<f64> {
    let n = xa.len();
    if n == 0 {
        return Vec::new();
    }
    if order == 1.0 {
        return std::iter::once(xa[0])
            .chain(xa.windows(2).map(|w| w[1] - w[0]))
            .collect();
    }
    accumulate(xa, -order)
}

/// Trapezoid background values `z(k) = (xa(k) + xa(k−1)) / 2` for `k = 2..n`.
///
/// Returns an empty vector for inputs shorter than two.
pub fn background(xa: &[f64]) -> Vec<f64> {
    xa.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}
