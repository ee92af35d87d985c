use crate::fracops::Series;
use crate::metrics::mape;
use crate::models::{Anchor, Fgm11, GreyModel, HyperParams, Ufgm11, EPS_SINGULAR};

/// In-sample MAPE of the kernel model as a function of `[r, alpha]`.
///
/// Any failure (singular system, singular parameters, non-finite output)
/// maps to `+∞`.
pub fn ufgm_objective(train: &Series) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |p: &[f64]| {
        let (r, alpha) = (p[0], p[1]);
        if !(r >= EPS_SINGULAR) {
            return f64::INFINITY;
        }
        let Ok(hyper) = HyperParams::new(r, alpha) else {
            return f64::INFINITY;
        };
        in_sample_mape(&Ufgm11::new(hyper), train)
    }
}

/// In-sample MAPE of FGM(1,1) as a function of `[r]`.
pub fn fgm_objective(train: &Series, anchor: Anchor) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |p: &[f64]| {
        if !(p[0] >= EPS_SINGULAR) {
            return f64::INFINITY;
        }
        in_sample_mape(&Fgm11::with_anchor(p[0], anchor), train)
    }
}

fn in_sample_mape<M: GreyModel>(model: &M, train: &Series) -> f64 {
    model
        .fit_predict(train, 0)
        .ok()
        .and_then(|pred| mape(train.values(), &pred.fitted, true).ok())
        .filter(|m| m.is_finite())
        .unwrap_or(f64::INFINITY)
}
