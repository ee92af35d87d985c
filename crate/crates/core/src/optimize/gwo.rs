//! Grey wolf optimizer: wolves move towards the mean of three positions
//! guided by the alpha, beta and delta leaders; `a` decays linearly 2 → 0.

use super::Search;

#[derive(Clone)]
struct Leader {
    position: Vec<f64>,
    fitness: f64,
}

fn rank_leaders(leaders: &mut [Leader; 3], position: &[f64], fitness: f64) {
    if fitness < leaders[0].fitness {
        leaders[2] = leaders[1].clone();
        leaders[1] = leaders[0].clone();
        leaders[0] = Leader {
            position: position.to_vec(),
            fitness,
        };
    } else if fitness < leaders[1].fitness {
        leaders[2] = leaders[1].clone();
        leaders[1] = Leader {
            position: position.to_vec(),
            fitness,
        };
    } else if fitness < leaders[2].fitness {
        leaders[2] = Leader {
            position: position.to_vec(),
            fitness,
        };
    }
}

pub(crate) fn run<F>(s: &mut Search<'_, F>)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = s.dim();
    let mut wolves = s.random_population();
    let fitness = s.evaluate(&mut wolves);

    let empty = Leader {
        position: wolves[0].clone(),
        fitness: f64::INFINITY,
    };
    let mut leaders = [empty.clone(), empty.clone(), empty];
    for (w, f) in wolves.iter().zip(&fitness) {
        rank_leaders(&mut leaders, w, *f);
    }

    let total = s.iterations as f64;
    for t in 0..s.iterations {
        let a = 2.0 - 2.0 * t as f64 / total;
        for wolf in wolves.iter_mut() {
            for i in 0..dim {
                let mut sum = 0.0;
                for leader in &leaders {
                    let big_a = 2.0 * a * s.uniform() - a;
                    let big_c = 2.0 * s.uniform();
                    let d = (big_c * leader.position[i] - wolf[i]).abs();
                    sum += leader.position[i] - big_a * d;
                }
                wolf[i] = sum / 3.0;
            }
        }
        let fitness = s.evaluate(&mut wolves);
        for (w, f) in wolves.iter().zip(&fitness) {
            rank_leaders(&mut leaders, w, *f);
        }
        s.end_iteration();
    }
}
