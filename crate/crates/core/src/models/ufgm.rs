use crate::error::Result;
use crate::fracops::{background, fago, ifago, Series};
use crate::linalg::least_squares;

use super::{
    split_restored, Coefficients, ExponentialKernel, GreyModel, HyperParams, MemoryKernel, ModelKind, Prediction,
    StructuralParams,
};

/// Least-squares estimate of `(a, b, c)` for a kernel model.
///
/// Minimizes `Σ_{k=2..n} (y(k) + a·z(k) − b·k − c)²` where `y` is the
/// kernel's derivative sequence and `z` the background of the order-`α`
/// accumulation.
pub fn fit_with_kernel<K: MemoryKernel + ?Sized>(
    kernel: &K,
    train: &Series,
    hyper: &HyperParams,
) -> Result<StructuralParams> {
    train.check_modeling()?;
    hyper.validate()?;
    let x = train.values();
    let z = background(fago(x, hyper.alpha).values());
    let y = kernel.derivative_sequence(x, hyper);
    let rows: Vec<[f64; 3]> = z.iter().enumerate().map(|(i, zk)| [-zk, (i + 2) as f64, 1.0]).collect();
    let [a, b, c] = least_squares(&rows, &y[1..])?;
    let params = StructuralParams { a, b, c };
    kernel.validate(&params, hyper)?;
    Ok(params)
}

/// Estimates `(a, b, c)` for the exponential-kernel model.
pub fn fit_ufgm(train: &Series, hyper: &HyperParams) -> Result<StructuralParams> {
    fit_with_kernel(&ExponentialKernel::default(), train, hyper)
}

/// Exponential-kernel time response at step `k`, on the accumulated scale.
pub fn ufgm_response(params: &StructuralParams, hyper: &HyperParams, x_alpha_1: f64, k: usize) -> Result<f64> {
    ExponentialKernel::default().response(params, hyper, x_alpha_1, k)
}

/// Responses for `k = 1..=len` restored to the raw scale.
pub fn restore_ufgm<K: MemoryKernel + ?Sized>(
    kernel: &K,
    params: &StructuralParams,
    hyper: &HyperParams,
    initial: f64,
    len: usize,
) -> Result<Vec<f64>> {
    let accumulated = (1..=len)
        .map(|k| kernel.response(params, hyper, initial, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ifago(&accumulated, hyper.alpha))
}

/// Fitted and forecast values for already estimated parameters, with the
/// response pinned to the first observation.
pub fn predict_ufgm(
    train: &Series,
    hyper: &HyperParams,
    params: &StructuralParams,
    horizon: usize,
) -> Result<Prediction> {
    train.check_modeling()?;
    let n = train.len();
    let restored = restore_ufgm(
        &ExponentialKernel::default(),
        params,
        hyper,
        train.values()[0],
        n + horizon,
    )?;
    let (fitted, forecast) = split_restored(restored, n);
    Prediction {
        kind: ModelKind::Ufgm,
        r: Some(hyper.r),
        alpha: Some(hyper.alpha),
        anchor: None,
        coefficients: Coefficients::from(*params),
        fitted,
        forecast,
    }
    .ensure_finite()
}

/// The exponential-kernel fractional model at fixed emerging coefficients.
#[derive(Debug, Clone, Copy)]
pub struct Ufgm11 {
    pub hyper: HyperParams,
}

impl Ufgm11 {
    pub fn new(hyper: HyperParams) -> Self {
        Ufgm11 { hyper }
    }
}

impl GreyModel for Ufgm11 {
    fn kind(&self) -> ModelKind {
        ModelKind::Ufgm
    }

    fn fit_predict(&self, train: &Series, horizon: usize) -> Result<Prediction> {
        let params = fit_ufgm(train, &self.hyper)?;
        predict_ufgm(train, &self.hyper, &params, horizon)
    }
}
