use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fracops::Series;
use crate::metrics::{lewis_grade, LewisGrade, MetricBlock};

use super::{Anchor, Coefficients, GreyModel, ModelKind, Prediction};

/// A fitted model with restored values and accuracy scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Anchor>,
    pub coefficients: Coefficients,
    pub fitted: Vec<f64>,
    pub forecast: Vec<f64>,
    pub metrics_in: MetricBlock,
    pub lewis_in: LewisGrade,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics_out: Option<MetricBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lewis_out: Option<LewisGrade>,
}

impl FitReport {
    /// Scores a prediction. In-sample metrics skip the pinned first point;
    /// out-of-sample metrics cover the forecasts that have a holdout value.
    pub fn from_prediction(pred: Prediction, train: &Series, holdout: &[f64]) -> Result<Self> {
        let metrics_in = MetricBlock::in_sample(train.values(), &pred.fitted)?;
        let scored = holdout.len().min(pred.forecast.len());
        let metrics_out = if scored > 0 {
            Some(MetricBlock::out_of_sample(
                &holdout[..scored],
                &pred.forecast[..scored],
            )?)
        } else {
            None
        };
        Ok(FitReport {
            model: pred.kind,
            r: pred.r,
            alpha: pred.alpha,
            anchor: pred.anchor,
            coefficients: pred.coefficients,
            lewis_in: lewis_grade(metrics_in.mape)?,
            lewis_out: metrics_out.map(|m| lewis_grade(m.mape)).transpose()?,
            fitted: pred.fitted,
            forecast: pred.forecast,
            metrics_in,
            metrics_out,
        })
    }
}

/// Fits `model` on `train`, forecasts `horizon` steps and scores against `holdout`.
pub fn evaluate<M: GreyModel + ?Sized>(
    model: &M,
    train: &Series,
    horizon: usize,
    holdout: &[f64],
) -> Result<FitReport> {
    let pred = model.fit_predict(train, horizon)?;
    FitReport::from_prediction(pred, train, holdout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Dgm11, Gm11};

    #[test]
    fn report_shapes() {
        let values = Series::new(vec![10.0, 11.0, 12.5, 13.1, 14.8, 15.9, 17.2, 18.0]);
        let (train, holdout) = values.split(6).unwrap();
        let rep = evaluate(&Gm11, &train, 2, holdout.values()).unwrap();
        assert_eq!(rep.fitted.len(), 6);
        assert_eq!(rep.forecast.len(), 2);
        assert_eq!(rep.fitted[0], 10.0);
        assert_eq!(rep.metrics_in.count, 5);
        assert_eq!(rep.metrics_out.unwrap().count, 2);
        assert!(rep.lewis_out.is_some());

        let rep = evaluate(&Dgm11, &train, 0, &[]).unwrap();
        assert!(rep.forecast.is_empty());
        assert!(rep.metrics_out.is_none());

        // horizon beyond the holdout scores only the overlap
        let rep = evaluate(&Gm11, &train, 5, holdout.values()).unwrap();
        assert_eq!(rep.metrics_out.unwrap().count, 2);
    }
}
