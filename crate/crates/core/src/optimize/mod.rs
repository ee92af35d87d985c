//! Bounded continuous metaheuristics: PSO, GWO, WOA and ALO.
//!
//! All four share one contract: [`minimize`] takes a pure objective, a box
//! and an [`OptimizerConfig`], and returns the best point seen together with
//! the per-iteration best-so-far trace. Every candidate is clamped into the
//! box before it is evaluated. Randomness comes from a single ChaCha stream
//! seeded from the config, and each population is evaluated as a batch
//! whose results are read back in index order, so a run is bit-reproducible
//! whether or not the batch is evaluated in parallel.

mod alo;
mod gwo;
mod objective;
mod pso;
mod woa;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};

pub use objective::{fgm_objective, ufgm_objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pso,
    Gwo,
    Woa,
    Alo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Pso, Algorithm::Gwo, Algorithm::Woa, Algorithm::Alo];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Pso => "pso",
            Algorithm::Gwo => "gwo",
            Algorithm::Woa => "woa",
            Algorithm::Alo => "alo",
        })
    }
}

impl FromStr for Algorithm {
    type Err = GreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pso" => Ok(Algorithm::Pso),
            "gwo" => Ok(Algorithm::Gwo),
            "woa" => Ok(Algorithm::Woa),
            "alo" => Ok(Algorithm::Alo),
            other => Err(GreyError::InvalidConfig(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Per-dimension box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(GreyError::InvalidConfig(
                "bounds must be non-empty and of equal dimension".into(),
            ));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(GreyError::InvalidConfig(format!(
                    "dimension {i}: lower bound {l} must be below upper bound {u}"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// `[0.01, 1]` in every dimension.
    pub fn unit(dim: usize) -> Self {
        SearchSpace::new(vec![0.01; dim], vec![1.0; dim]).expect("valid box")
    }

    /// Default box for `(r, alpha)`: `r ∈ [0.01, 1]`, `alpha ∈ [0.01, 2]`.
    pub fn ufgm_default() -> Self {
        SearchSpace::new(vec![0.01, 0.01], vec![1.0, 2.0]).expect("valid box")
    }

    /// Default box for the FGM order: `r ∈ [0.01, 1]`.
    pub fn fgm_default() -> Self {
        SearchSpace::unit(1)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .enumerate()
                .all(|(i, v)| *v >= self.lower[i] && *v <= self.upper[i])
    }

    /// Clamps in place; non-finite coordinates go to the box centre.
    pub fn clamp(&self, p: &mut [f64]) {
        for (i, v) in p.iter_mut().enumerate() {
            *v = if v.is_finite() {
                v.clamp(self.lower[i], self.upper[i])
            } else {
                0.5 * (self.lower[i] + self.upper[i])
            };
        }
    }
}

/// PSO constants (constriction-equivalent inertia form).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity cap as a fraction of each dimension's width.
    pub max_velocity: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            inertia: 0.729,
            cognitive: 1.494,
            social: 1.494,
            max_velocity: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    pub pso: PsoParams,
    /// Logarithmic spiral shape constant of WOA.
    pub woa_spiral: f64,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        OptimizerConfig {
            algorithm,
            population: 30,
            iterations: 100,
            seed,
            pso: PsoParams::default(),
            woa_spiral: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(GreyError::InvalidConfig(format!(
                "population must be at least 4, got {}",
                self.population
            )));
        }
        if self.iterations < 1 {
            return Err(GreyError::InvalidConfig("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub best_point: Vec<f64>,
    #[serde(with = "crate::io::float_or_tag")]
    pub best_fitness: f64,
    /// Best fitness seen after each iteration.
    #[serde(with = "crate::io::floats_or_tags")]
    pub trace: Vec<f64>,
    pub evaluations: usize,
}

/// Minimizes `objective` over `space`.
///
/// NaN objective values are read as `+∞`.
pub fn minimize<F>(objective: &F, space: &SearchSpace, config: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let mut search = Search::new(objective, space, config);
    match config.algorithm {
        Algorithm::Pso => pso::run(&mut search),
        Algorithm::Gwo => gwo::run(&mut search),
        Algorithm::Woa => woa::run(&mut search),
        Algorithm::Alo => alo::run(&mut search),
    }
    Ok(search.finish())
}

/// Runs every `(algorithm, seed)` pair and returns all results plus the
/// index of the lowest best fitness (first one on ties).
pub fn minimize_best_of<F>(
    objective: &F,
    space: &SearchSpace,
    algorithms: &[Algorithm],
    seeds: &[u64],
    template: &OptimizerConfig,
) -> Result<(Vec<OptResult>, usize)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if algorithms.is_empty() || seeds.is_empty() {
        return Err(GreyError::InvalidConfig(
            "need at least one algorithm and one seed".into(),
        ));
    }
    let mut runs = Vec::with_capacity(algorithms.len() * seeds.len());
    for &algorithm in algorithms {
        for &seed in seeds {
            let cfg = OptimizerConfig {
                algorithm,
                seed,
                ..*template
            };
            runs.push(minimize(objective, space, &cfg)?);
        }
    }
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.best_fitness < runs[b].best_fitness { i } else { b });
    Ok((runs, best))
}

/// Shared state of one optimizer run.
pub(crate) struct Search<'a, F> {
    objective: &'a F,
    pub(crate) space: &'a SearchSpace,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) population: usize,
    pub(crate) iterations: usize,
    pub(crate) pso: PsoParams,
    pub(crate) woa_spiral: f64,
    algorithm: Algorithm,
    seed: u64,
    best_point: Vec<f64>,
    best_fitness: f64,
    trace: Vec<f64>,
    evaluations: usize,
}

impl<'a, F> Search<'a, F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn new(objective: &'a F, space: &'a SearchSpace, config: &OptimizerConfig) -> Self {
        Search {
            objective,
            space,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            population: config.population,
            iterations: config.iterations,
            pso: config.pso,
            woa_spiral: config.woa_spiral,
            algorithm: config.algorithm,
            seed: config.seed,
            best_point: space.lower().to_vec(),
            best_fitness: f64::INFINITY,
            trace: Vec::with_capacity(config.iterations),
            evaluations: 0,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.space.dim()
    }

    pub(crate) fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub(crate) fn random_point(&mut self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.space.lower()[i] + self.rng.random::<f64>() * self.space.width(i))
            .collect()
    }

    pub(crate) fn random_population(&mut self) -> Vec<Vec<f64>> {
        (0..self.population).map(|_| self.random_point()).collect()
    }

    /// Clamps and evaluates a batch; updates the incumbent in index order.
    pub(crate) fn evaluate(&mut self, points: &mut [Vec<f64>]) -> Vec<f64> {
        for p in points.iter_mut() {
            self.space.clamp(p);
        }
        let objective = self.objective;
        let values: Vec<f64> = points
            .par_iter()
            .map(|p| {
                let v = objective(p);
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        self.evaluations += points.len();
        for (p, &v) in points.iter().zip(&values) {
            if v < self.best_fitness {
                self.best_fitness = v;
                self.best_point.clone_from(p);
            }
        }
        values
    }

    pub(crate) fn incumbent(&self) -> (&[f64], f64) {
        (&self.best_point, self.best_fitness)
    }

    pub(crate) fn end_iteration(&mut self) {
        self.trace.push(self.best_fitness);
    }

    fn finish(self) -> OptResult {
        OptResult {
            algorithm: self.algorithm,
            seed: self.seed,
            best_point: self.best_point,
            best_fitness: self.best_fitness,
            trace: self.trace,
            evaluations: self.evaluations,
        }
    }
}
