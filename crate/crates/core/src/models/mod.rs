//! Grey forecasting models behind one fit/predict contract.
//!
//! * [`Ufgm11`]: fractional grey model with an exponential memory kernel,
//!   linear drive `b·t + c` and fractional accumulation.
//! * [`Gm11`], [`Dgm11`], [`Fgm11`]: the classic benchmarks.
//!
//! Every model maps a training [`Series`] and a horizon to a
//! [`Prediction`]; [`evaluate`] turns that into a scored [`FitReport`].

mod benchmarks;
mod kernel;
mod report;
mod ufgm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::fracops::Series;

pub use benchmarks::{
    dgm_response, fit_dgm11, fit_fgm11, fit_gm11, gm_response, Anchor, Dgm11, Fgm11, Gm11, GreyCoefficients,
};
pub use kernel::{ExponentialKernel, MemoryKernel};
pub use report::{evaluate, FitReport};
pub use ufgm::{fit_ufgm, fit_with_kernel, predict_ufgm, restore_ufgm, ufgm_response, Ufgm11};

/// Guard for `|a|`, `|1 − a·r + a|` and `|β₁ − 1|`.
pub const EPS_SINGULAR: f64 = 1e-8;

/// The emerging coefficients: kernel memory order `r` and accumulation order `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub r: f64,
    pub alpha: f64,
}

impl HyperParams {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        let h = HyperParams { r, alpha };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() || self.r < EPS_SINGULAR {
            return Err(GreyError::SingularParameters(format!(
                "memory order r = {} must exceed {EPS_SINGULAR:e}",
                self.r
            )));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(GreyError::InvalidConfig(format!(
                "accumulation order alpha = {} must be positive",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Linear coefficients of the whitened equation `D x + a·x = b·t + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Estimated coefficients of any of the supported models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Coefficients {
    /// `a`, `b`, `c` of the kernel model.
    Linear { a: f64, b: f64, c: f64 },
    /// Development coefficient and grey input of GM/FGM.
    Grey { a: f64, b: f64 },
    /// Recursion `x¹(k) = β₁·x¹(k−1) + β₂` of DGM.
    Discrete { beta1: f64, beta2: f64 },
}

impl From<StructuralParams> for Coefficients {
    fn from(p: StructuralParams) -> Self {
        Coefficients::Linear { a: p.a, b: p.b, c: p.c }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Gm,
    Dgm,
    Fgm,
    Ufgm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Gm, ModelKind::Dgm, ModelKind::Fgm, ModelKind::Ufgm];

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Gm => "GM(1,1)",
            ModelKind::Dgm => "DGM(1,1)",
            ModelKind::Fgm => "FGM(1,1)",
            ModelKind::Ufgm => "UFGM(1,1)",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Gm => "gm",
            ModelKind::Dgm => "dgm",
            ModelKind::Fgm => "fgm",
            ModelKind::Ufgm => "ufgm",
        })
    }
}

impl FromStr for ModelKind {
    type Err = GreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gm" => Ok(ModelKind::Gm),
            "dgm" => Ok(ModelKind::Dgm),
            "fgm" => Ok(ModelKind::Fgm),
            "ufgm" => Ok(ModelKind::Ufgm),
            other => Err(GreyError::InvalidConfig(format!("unknown model `{other}`"))),
        }
    }
}

/// Restored in-sample and out-of-sample values of one fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub kind: ModelKind,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub anchor: Option<Anchor>,
    pub coefficients: Coefficients,
    pub fitted: Vec<f64>,
    pub forecast: Vec<f64>,
}

impl Prediction {
    pub(crate) fn ensure_finite(self) -> Result<Self> {
        if let Some(v) = self.fitted.iter().chain(&self.forecast).find(|v| !v.is_finite()) {
            return Err(GreyError::NonFinite(format!("{} produced {v}", self.kind.label())));
        }
        Ok(self)
    }
}

/// Common contract of all grey models.
pub trait GreyModel {
    fn kind(&self) -> ModelKind;

    /// Fits on `train` and restores `train.len() + horizon` values.
    fn fit_predict(&self, train: &Series, horizon: usize) -> Result<Prediction>;
}

/// Splits restored values into fitted and forecast parts.
pub(crate) fn split_restored(mut restored: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let forecast = restored.split_off(n);
    (restored, forecast)
}
