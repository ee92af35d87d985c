//! Whale optimization algorithm: shrinking encirclement or random search
//! with probability 1/2, logarithmic spiral towards the best otherwise.

use std::f64::consts::PI;

use super::Search;

pub(crate) fn run<F>(s: &mut Search<'_, F>)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = s.dim();
    let n = s.population;
    let spiral = s.woa_spiral;
    let mut whales = s.random_population();
    s.evaluate(&mut whales);

    let total = s.iterations as f64;
    for t in 0..s.iterations {
        let a = 2.0 - 2.0 * t as f64 / total;
        let a2 = -1.0 - t as f64 / total;
        let best = s.incumbent().0.to_vec();
        let snapshot = whales.clone();
        for whale in whales.iter_mut() {
            let big_a = 2.0 * a * s.uniform() - a;
            let big_c = 2.0 * s.uniform();
            let l = (a2 - 1.0) * s.uniform() + 1.0;
            let p = s.uniform();
            if p < 0.5 {
                let target = if big_a.abs() < 1.0 {
                    &best
                } else {
                    let k = ((s.uniform() * n as f64) as usize).min(n - 1);
                    &snapshot[k]
                };
                for i in 0..dim {
                    let d = (big_c * target[i] - whale[i]).abs();
                    whale[i] = target[i] - big_a * d;
                }
            } else {
                let factor = (spiral * l).exp() * (2.0 * PI * l).cos();
                for i in 0..dim {
                    let d = (best[i] - whale[i]).abs();
                    whale[i] = d * factor + best[i];
                }
            }
        }
        s.evaluate(&mut whales);
        s.end_iteration();
    }
}
