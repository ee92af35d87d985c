use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fracops::Series;
use crate::models::{evaluate, Anchor, Dgm11, Fgm11, FitReport, Gm11, HyperParams, ModelKind, Ufgm11};
use crate::optimize::{
    fgm_objective, minimize_best_of, ufgm_objective, Algorithm, OptResult, OptimizerConfig, SearchSpace,
};

use super::CaseDataset;

/// How FGM and UFGM orders are chosen: every `(algorithm, seed)` pair is
/// run and the lowest in-sample MAPE wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchPolicy {
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub population: usize,
    pub iterations: usize,
    pub ufgm_space: SearchSpace,
    pub fgm_space: SearchSpace,
    /// FGM response anchors tried; the better in-sample fit is kept.
    pub fgm_anchors: Vec<Anchor>,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy {
            algorithms: Algorithm::ALL.to_vec(),
            seeds: vec![42],
            population: 30,
            iterations: 100,
            ufgm_space: SearchSpace::ufgm_default(),
            fgm_space: SearchSpace::fgm_default(),
            fgm_anchors: vec![Anchor::First, Anchor::Last],
        }
    }
}

impl SearchPolicy {
    pub fn with_seeds(seeds: impl IntoIterator<Item = u64>) -> Self {
        SearchPolicy {
            seeds: seeds.into_iter().collect(),
            ..SearchPolicy::default()
        }
    }

    fn template(&self) -> OptimizerConfig {
        OptimizerConfig {
            population: self.population,
            iterations: self.iterations,
            ..OptimizerConfig::new(Algorithm::Pso, 0)
        }
    }
}

/// Optimizer runs behind a searched model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub runs: Vec<OptResult>,
    pub best: usize,
}

impl SearchSummary {
    pub fn best_run(&self) -> &OptResult {
        &self.runs[self.best]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRun {
    pub report: FitReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: CaseDataset,
    pub policy: SearchPolicy,
    pub runs: Vec<ModelRun>,
}

impl Comparison {
    pub fn report(&self, kind: ModelKind) -> Option<&FitReport> {
        self.runs.iter().map(|r| &r.report).find(|r| r.model == kind)
    }
}

/// Searches `r` for FGM(1,1) over every configured anchor.
pub fn search_fgm(train: &Series, policy: &SearchPolicy) -> Result<(Anchor, SearchSummary)> {
    let mut best: Option<(Anchor, SearchSummary)> = None;
    for &anchor in &policy.fgm_anchors {
        let objective = fgm_objective(train, anchor);
        let (runs, idx) = minimize_best_of(
            &objective,
            &policy.fgm_space,
            &policy.algorithms,
            &policy.seeds,
            &policy.template(),
        )?;
        let summary = SearchSummary { runs, best: idx };
        let better = best
            .as_ref()
            .is_none_or(|(_, b)| summary.best_run().best_fitness < b.best_run().best_fitness);
        if better {
            best = Some((anchor, summary));
        }
    }
    Ok(best.expect("policy has at least one anchor"))
}

/// Searches `(r, alpha)` for the kernel model.
pub fn search_ufgm(train: &Series, policy: &SearchPolicy) -> Result<SearchSummary> {
    let objective = ufgm_objective(train);
    let (runs, best) = minimize_best_of(
        &objective,
        &policy.ufgm_space,
        &policy.algorithms,
        &policy.seeds,
        &policy.template(),
    )?;
    Ok(SearchSummary { runs, best })
}

/// Fits GM, DGM, FGM and UFGM on the training split and scores the holdout.
pub fn run_comparison(dataset: &CaseDataset, policy: &SearchPolicy) -> Result<Comparison> {
    if policy.fgm_anchors.is_empty() {
        return Err(crate::error::GreyError::InvalidConfig(
            "no FGM anchor configured".into(),
        ));
    }
    let train = dataset.train();
    train.check_modeling()?;
    let holdout = dataset.holdout();
    let horizon = holdout.len();

    let mut runs = vec![
        ModelRun {
            report: evaluate(&Gm11, &train, horizon, holdout)?,
            search: None,
        },
        ModelRun {
            report: evaluate(&Dgm11, &train, horizon, holdout)?,
            search: None,
        },
    ];

    let (anchor, fgm_search) = search_fgm(&train, policy)?;
    let r = fgm_search.best_run().best_point[0];
    runs.push(ModelRun {
        report: evaluate(&Fgm11::with_anchor(r, anchor), &train, horizon, holdout)?,
        search: Some(fgm_search),
    });

    let ufgm_search = search_ufgm(&train, policy)?;
    let point = &ufgm_search.best_run().best_point;
    let hyper = HyperParams::new(point[0], point[1])?;
    runs.push(ModelRun {
        report: evaluate(&Ufgm11::new(hyper), &train, horizon, holdout)?,
        search: Some(ufgm_search),
    });

    Ok(Comparison {
        dataset: dataset.clone(),
        policy: policy.clone(),
        runs,
    })
}

/// Plain-text table of per-point values and MAPE summaries.
pub fn render_table(cmp: &Comparison) -> String {
    let ds = &cmp.dataset;
    let values = ds.values.values();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dataset: {} (train {}, holdout {})",
        ds.name,
        ds.train_len,
        values.len() - ds.train_len
    );
    let _ = write!(out, "{:>8} {:>10}", "period", "raw");
    for run in &cmp.runs {
        let _ = write!(out, " {:>10} {:>8}", run.report.model.label(), "err%");
    }
    out.push('\n');
    for (i, actual) in values.iter().enumerate() {
        if i == ds.train_len {
            out.push_str("-- out-of-sample --\n");
        }
        let label = ds.labels.as_ref().map_or_else(|| (i + 1).to_string(), |l| l[i].clone());
        let _ = write!(out, "{label:>8} {actual:>10.2}");
        for run in &cmp.runs {
            let rep = &run.report;
            let v = if i < ds.train_len {
                rep.fitted.get(i)
            } else {
                rep.forecast.get(i - ds.train_len)
            };
            match v {
                Some(v) => {
                    let _ = write!(out, " {v:>10.2} {:>8.4}", 100.0 * ((v - actual) / actual).abs());
                }
                None => {
                    let _ = write!(out, " {:>10} {:>8}", "-", "-");
                }
            }
        }
        out.push('\n');
    }
    out.push('\n');
    for run in &cmp.runs {
        let rep = &run.report;
        let _ = write!(
            out,
            "{:<10} in-sample MAPE {:>8.4} ({})",
            rep.model.label(),
            rep.metrics_in.mape,
            rep.lewis_in
        );
        if let (Some(m), Some(g)) = (rep.metrics_out, rep.lewis_out) {
            let _ = write!(out, "  out-of-sample MAPE {:>8.4} ({g})", m.mape);
        }
        if let Some(r) = rep.r {
            let _ = write!(out, "  r = {r:.6}");
        }
        if let Some(a) = rep.alpha {
            let _ = write!(out, "  alpha = {a:.6}");
        }
        if let Some(anchor) = rep.anchor {
            let _ = write!(out, "  anchor = {anchor}");
        }
        out.push('\n');
    }
    out
}

/// Plot-ready rows `k,actual,value,model,segment`.
pub fn plot_rows(actual: &[f64], reports: &[FitReport]) -> String {
    let mut out = String::from("k,actual,value,model,segment\n");
    for rep in reports {
        let values = rep
            .fitted
            .iter()
            .map(|v| (v, "fitted"))
            .chain(rep.forecast.iter().map(|v| (v, "forecast")));
        for (i, (v, segment)) in values.enumerate() {
            let a = actual.get(i).map_or(String::new(), |a| a.to_string());
            let _ = writeln!(out, "{},{a},{v},{},{segment}", i + 1, rep.model);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::builtin_dataset;

    fn quick_policy() -> SearchPolicy {
        SearchPolicy {
            algorithms: vec![Algorithm::Pso],
            seeds: vec![1],
            iterations: 20,
            ..SearchPolicy::default()
        }
    }

    #[test]
    fn comparison_has_four_models() {
        let ds = builtin_dataset("case2").unwrap();
        let cmp = run_comparison(&ds, &quick_policy()).unwrap();
        let kinds: Vec<ModelKind> = cmp.runs.iter().map(|r| r.report.model).collect();
        assert_eq!(kinds, ModelKind::ALL.to_vec());
        for run in &cmp.runs {
            assert_eq!(run.report.fitted.len(), 12);
            assert_eq!(run.report.forecast.len(), 4);
            assert!(run.report.metrics_out.is_some());
        }
        assert!(cmp.runs[2].search.is_some() && cmp.runs[3].search.is_some());
        let table = render_table(&cmp);
        assert!(table.contains("UFGM(1,1)") && table.contains("2019"));
    }

    #[test]
    fn comparison_is_deterministic() {
        let ds = builtin_dataset("case1").unwrap();
        let a = run_comparison(&ds, &quick_policy()).unwrap();
        let b = run_comparison(&ds, &quick_policy()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn plot_rows_layout() {
        let ds = builtin_dataset("case1").unwrap();
        let rep = evaluate(&Gm11, &ds.train(), 4, ds.holdout()).unwrap();
        let csv = plot_rows(ds.values.values(), &[rep]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines[1].starts_with("1,1038.31,1038.31,gm,fitted"));
        assert!(lines[16].ends_with("gm,forecast"));
    }
}
