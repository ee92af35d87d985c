//! Ant lion optimizer.
//!
//! Each ant performs a bounded random walk around an antlion picked by
//! roulette wheel and another around the elite, and moves to the average of
//! the two. Walk bounds shrink as the iteration count grows. Antlions are
//! replaced by fitter ants after every iteration.
//!
//! Roulette weights are rank based (`n − rank`) so that zero or infinite
//! fitness values need no special casing.

use rand::Rng;

use super::Search;

/// Shrink ratio `I` for iteration `t` of `total`.
fn shrink_ratio(t: usize, total: usize) -> f64 {
    let frac = t as f64 / total as f64;
    let w = if frac > 0.95 {
        6.0
    } else if frac > 0.9 {
        5.0
    } else if frac > 0.75 {
        4.0
    } else if frac > 0.5 {
        3.0
    } else if frac > 0.1 {
        2.0
    } else {
        return 1.0;
    };
    1.0 + 10f64.powf(w) * frac
}

/// Position at step `t` of a ±1 walk of `total` steps, min-max normalized
/// into `[lo, hi]`.
fn walk_position<R: Rng>(rng: &mut R, t: usize, total: usize, lo: f64, hi: f64) -> f64 {
    let mut pos = 0i64;
    let (mut min, mut max) = (0i64, 0i64);
    let mut at_t = 0i64;
    for step in 1..=total {
        pos += if rng.random::<f64>() > 0.5 { 1 } else { -1 };
        min = min.min(pos);
        max = max.max(pos);
        if step == t {
            at_t = pos;
        }
    }
    if max == min {
        return 0.5 * (lo + hi);
    }
    (at_t - min) as f64 * (hi - lo) / (max - min) as f64 + lo
}

fn walk_around<F>(s: &mut Search<'_, F>, centre: &[f64], t: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let ratio = shrink_ratio(t, s.iterations);
    let mut lb: Vec<f64> = s.space.lower().iter().map(|v| v / ratio).collect();
    let mut ub: Vec<f64> = s.space.upper().iter().map(|v| v / ratio).collect();
    let flip_lb = s.uniform() < 0.5;
    let flip_ub = s.uniform() >= 0.5;
    for i in 0..centre.len() {
        lb[i] = if flip_lb { lb[i] + centre[i] } else { -lb[i] + centre[i] };
        ub[i] = if flip_ub { ub[i] + centre[i] } else { -ub[i] + centre[i] };
    }
    let total = s.iterations;
    (0..centre.len())
        .map(|i| walk_position(&mut s.rng, t, total, lb[i], ub[i]))
        .collect()
}

fn roulette<F>(s: &mut Search<'_, F>, n: usize) -> usize
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    // weights n, n−1, …, 1 over the sorted antlions
    let total = (n * (n + 1) / 2) as f64;
    let mut target = s.uniform() * total;
    for rank in 0..n {
        target -= (n - rank) as f64;
        if target < 0.0 {
            return rank;
        }
    }
    n - 1
}

fn sort_by_fitness(points: Vec<Vec<f64>>, fitness: Vec<f64>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut pairs: Vec<(Vec<f64>, f64)> = points.into_iter().zip(fitness).collect();
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
    pairs.into_iter().unzip()
}

pub(crate) fn run<F>(s: &mut Search<'_, F>)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = s.population;
    let mut antlions = s.random_population();
    let fit = s.evaluate(&mut antlions);
    let (mut antlions, mut antlion_fit) = sort_by_fitness(antlions, fit);

    for t in 1..=s.iterations {
        let elite = antlions[0].clone();
        let mut ants = Vec::with_capacity(n);
        for _ in 0..n {
            let pick = roulette(s, n);
            let chosen = antlions[pick].clone();
            let ra = walk_around(s, &chosen, t);
            let re = walk_around(s, &elite, t);
            ants.push(ra.iter().zip(&re).map(|(a, e)| 0.5 * (a + e)).collect::<Vec<f64>>());
        }
        let ant_fit = s.evaluate(&mut ants);

        let mut merged = antlions;
        merged.extend(ants);
        let mut merged_fit = antlion_fit;
        merged_fit.extend(ant_fit);
        let (mut sorted, mut sorted_fit) = sort_by_fitness(merged, merged_fit);
        sorted.truncate(n);
        sorted_fit.truncate(n);
        antlions = sorted;
        antlion_fit = sorted_fit;
        s.end_iteration();
    }
}
