use crate::error::{GreyError, Result};
use crate::fracops::fago;

use super::{HyperParams, StructuralParams, EPS_SINGULAR};

/// A memory kernel together with the pieces a kernel model needs:
/// the discrete derivative of the accumulated series used for estimation,
/// and the closed-form time response of the whitened equation.
pub trait MemoryKernel: Send + Sync {
    fn name(&self) -> &str;

    /// Discrete derivative sequence (k = 1..n) regressed on during estimation.
    fn derivative_sequence(&self, x: &[f64], hyper: &HyperParams) -> Vec<f64>;

    fn validate(&self, params: &StructuralParams, hyper: &HyperParams) -> Result<()>;

    /// Accumulated-scale response at step `k ≥ 1`, equal to `x_alpha_1` at `k = 1`.
    fn response(&self, params: &StructuralParams, hyper: &HyperParams, x_alpha_1: f64, k: usize) -> Result<f64>;
}

/// Exponential kernel `exp(−r/(1−r)·t)` with unit normalization.
///
/// With this kernel the derivative of the order-`α` accumulation is the
/// order-`(α − r)` accumulation of the raw series, and the whitened
/// equation has the response
///
/// ```text
/// x̂(k) = (x̂(1) − b/a − c/a + b/(a²r))·exp(−a·r·(k−1)/(1 − a·r + a)) + (b/a)·k + c/a − b/(a²r)
/// ```
#[derive(Debug, Clone, Copy)]
pub struct ExponentialKernel {
    pub eps: f64,
}

impl Default for ExponentialKernel {
    fn default() -> Self {
        ExponentialKernel { eps: EPS_SINGULAR }
    }
}

impl MemoryKernel for ExponentialKernel {
    fn name(&self) -> &str {
        "exponential"
    }

    fn derivative_sequence(&self, x: &[f64], hyper: &HyperParams) -> Vec<f64> {
        fago(x, hyper.alpha - hyper.r).into_values()
    }

    fn validate(&self, p: &StructuralParams, hyper: &HyperParams) -> Result<()> {
        if !hyper.r.is_finite() || hyper.r < self.eps {
            return Err(GreyError::SingularParameters(format!(
                "r = {} is below {:e}",
                hyper.r, self.eps
            )));
        }
        if ![p.a, p.b, p.c].iter().all(|v| v.is_finite()) {
            return Err(GreyError::SingularParameters("non-finite structural parameters".into()));
        }
        if p.a.abs() < self.eps {
            return Err(GreyError::SingularParameters(format!(
                "|a| = {:e} is below {:e}",
                p.a.abs(),
                self.eps
            )));
        }
        let denom = 1.0 - p.a * hyper.r + p.a;
        if denom.abs() < self.eps {
            return Err(GreyError::SingularParameters(format!(
                "|1 - a*r + a| = {:e} is below {:e}",
                denom.abs(),
                self.eps
            )));
        }
        Ok(())
    }

    fn response(&self, p: &StructuralParams, hyper: &HyperParams, x_alpha_1: f64, k: usize) -> Result<f64> {
        self.validate(p, hyper)?;
        let (a, b, c, r) = (p.a, p.b, p.c, hyper.r);
        let steps = k as f64 - 1.0;
        // With m = e^(…) − 1 the response is x̂(1) + (b/a)(k − 1) + m·C; at k = 1
        // m is exactly zero.
        let m = (-a * r * steps / (1.0 - a * r + a)).exp_m1();
        let amplitude = x_alpha_1 - b / a - c / a + b / (a * a * r);
        let value = x_alpha_1 + (b / a) * steps + m * amplitude;
        if !value.is_finite() {
            return Err(GreyError::NonFinite(format!("response at k = {k} is {value}")));
        }
        Ok(value)
    }
}
