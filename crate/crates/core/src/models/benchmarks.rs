//! GM(1,1), DGM(1,1) and FGM(1,1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::fracops::{background, fago, ifago, Series};
use crate::linalg::least_squares;

use super::{split_restored, Coefficients, GreyModel, ModelKind, Prediction, EPS_SINGULAR};

/// Development coefficient `a` and grey input `b` of `dx/dt + a·x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreyCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Which accumulated value the FGM response passes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// `x̂(1) = x(1)`; restored values start at the first observation.
    #[default]
    First,
    /// `x̂(n) = x(n)`, the newest accumulated training value.
    Last,
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anchor::First => "first",
            Anchor::Last => "last",
        })
    }
}

impl FromStr for Anchor {
    type Err = GreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Anchor::First),
            "last" => Ok(Anchor::Last),
            other => Err(GreyError::InvalidConfig(format!("unknown anchor `{other}`"))),
        }
    }
}

/// OLS of `target(k) = −a·z(k) + b` over `k = 2..n`.
fn estimate_grey(accumulated: &[f64], target: &[f64]) -> Result<GreyCoefficients> {
    let rows: Vec<[f64; 2]> = background(accumulated).iter().map(|z| [-z, 1.0]).collect();
    let [a, b] = least_squares(&rows, target)?;
    if a.abs() < EPS_SINGULAR {
        return Err(GreyError::SingularParameters(format!(
            "development coefficient |a| = {:e} is below {EPS_SINGULAR:e}",
            a.abs()
        )));
    }
    Ok(GreyCoefficients { a, b })
}

/// `x̂(k) = (x̂(k₀) − b/a)·e^{−a(k−k₀)} + b/a`, exact at `k = k₀`.
pub fn gm_response(coef: &GreyCoefficients, anchor_value: f64, anchor_k: usize, k: usize) -> f64 {
    let decay = (-coef.a * (k as f64 - anchor_k as f64)).exp();
    anchor_value * decay + coef.b / coef.a * (1.0 - decay)
}

fn gm_series(coef: &GreyCoefficients, anchor_value: f64, anchor_k: usize, len: usize) -> Vec<f64> {
    (1..=len)
        .map(|k| gm_response(coef, anchor_value, anchor_k, k))
        .collect()
}

/// Classic GM(1,1) on the first-order accumulation.
pub fn fit_gm11(train: &Series) -> Result<GreyCoefficients> {
    train.check_modeling()?;
    let x = train.values();
    let x1 = fago(x, 1.0);
    estimate_grey(x1.values(), &x[1..])
}

/// FGM(1,1): GM(1,1) form on the order-`r` accumulation.
pub fn fit_fgm11(train: &Series, r: f64) -> Result<GreyCoefficients> {
    train.check_modeling()?;
    check_fgm_order(r)?;
    let xr = fago(train.values(), r);
    let diffs: Vec<f64> = xr.values().windows(2).map(|w| w[1] - w[0]).collect();
    estimate_grey(xr.values(), &diffs)
}

fn check_fgm_order(r: f64) -> Result<()> {
    if !r.is_finite() || r < EPS_SINGULAR {
        return Err(GreyError::InvalidConfig(format!("FGM order r = {r} must be positive")));
    }
    Ok(())
}

/// DGM(1,1) least squares: `x¹(k) = β₁·x¹(k−1) + β₂`.
pub fn fit_dgm11(train: &Series) -> Result<(f64, f64)> {
    train.check_modeling()?;
    let x1 = fago(train.values(), 1.0).into_values();
    let rows: Vec<[f64; 2]> = x1[..x1.len() - 1].iter().map(|v| [*v, 1.0]).collect();
    let [beta1, beta2] = least_squares(&rows, &x1[1..])?;
    Ok((beta1, beta2))
}

/// `(β₁^m − 1)/(β₁ − 1)` without cancellation near `β₁ = 1`.
pub(crate) fn geometric_sum(beta1: f64, m: f64) -> f64 {
    let d = beta1 - 1.0;
    if d == 0.0 {
        return m;
    }
    if beta1 > 0.0 {
        (m * d.ln_1p()).exp_m1() / d
    } else {
        (beta1.powf(m) - 1.0) / d
    }
}

/// DGM accumulated response at step `k`; switches to the linear limit
/// `x(1) + β₂·(k−1)` when `|β₁ − 1| < EPS_SINGULAR`.
pub fn dgm_response(beta1: f64, beta2: f64, x0_1: f64, k: usize) -> f64 {
    let m = k as f64 - 1.0;
    if (beta1 - 1.0).abs() < EPS_SINGULAR {
        x0_1 + beta2 * m
    } else {
        beta1.powf(m) * x0_1 + beta2 * geometric_sum(beta1, m)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Gm11;

impl GreyModel for Gm11 {
    fn kind(&self) -> ModelKind {
        ModelKind::Gm
    }

    fn fit_predict(&self, train: &Series, horizon: usize) -> Result<Prediction> {
        let coef = fit_gm11(train)?;
        let n = train.len();
        let acc = gm_series(&coef, train.values()[0], 1, n + horizon);
        let (fitted, forecast) = split_restored(ifago(&acc, 1.0), n);
        Prediction {
            kind: ModelKind::Gm,
            r: None,
            alpha: None,
            anchor: None,
            coefficients: Coefficients::Grey { a: coef.a, b: coef.b },
            fitted,
            forecast,
        }
        .ensure_finite()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Dgm11;

impl GreyModel for Dgm11 {
    fn kind(&self) -> ModelKind {
        ModelKind::Dgm
    }

    fn fit_predict(&self, train: &Series, horizon: usize) -> Result<Prediction> {
        let (beta1, beta2) = fit_dgm11(train)?;
        let n = train.len();
        let x0_1 = train.values()[0];
        let acc: Vec<f64> = (1..=n + horizon).map(|k| dgm_response(beta1, beta2, x0_1, k)).collect();
        let (fitted, forecast) = split_restored(ifago(&acc, 1.0), n);
        Prediction {
            kind: ModelKind::Dgm,
            r: None,
            alpha: None,
            anchor: None,
            coefficients: Coefficients::Discrete { beta1, beta2 },
            fitted,
            forecast,
        }
        .ensure_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Fgm11 {
    pub r: f64,
    pub anchor: Anchor,
}

impl Fgm11 {
    pub fn new(r: f64) -> Self {
        Fgm11 {
            r,
            anchor: Anchor::First,
        }
    }

    pub fn with_anchor(r: f64, anchor: Anchor) -> Self {
        Fgm11 { r, anchor }
    }
}

impl GreyModel for Fgm11 {
    fn kind(&self) -> ModelKind {
        ModelKind::Fgm
    }

    fn fit_predict(&self, train: &Series, horizon: usize) -> Result<Prediction> {
        let coef = fit_fgm11(train, self.r)?;
        let n = train.len();
        let (anchor_value, anchor_k) = match self.anchor {
            Anchor::First => (train.values()[0], 1),
            Anchor::Last => (*fago(train.values(), self.r).values().last().expect("non-empty"), n),
        };
        let acc = gm_series(&coef, anchor_value, anchor_k, n + horizon);
        let (fitted, forecast) = split_restored(ifago(&acc, self.r), n);
        Prediction {
            kind: ModelKind::Fgm,
            r: Some(self.r),
            alpha: None,
            anchor: Some(self.anchor),
            coefficients: Coefficients::Grey { a: coef.a, b: coef.b },
            fitted,
            forecast,
        }
        .ensure_finite()
    }
}
