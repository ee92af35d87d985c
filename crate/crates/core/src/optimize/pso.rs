//! Particle swarm optimization, inertia-weight form.

use super::Search;

pub(crate) fn run<F>(s: &mut Search<'_, F>)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = s.dim();
    let params = s.pso;
    let vmax: Vec<f64> = (0..dim).map(|i| params.max_velocity * s.space.width(i)).collect();

    let mut positions = s.random_population();
    let mut velocities: Vec<Vec<f64>> = (0..s.population)
        .map(|_| (0..dim).map(|i| (2.0 * s.uniform() - 1.0) * vmax[i]).collect())
        .collect();
    let mut fitness = s.evaluate(&mut positions);
    let mut personal = positions.clone();
    let mut personal_fit = fitness.clone();

    for _ in 0..s.iterations {
        let global = s.incumbent().0.to_vec();
        for (j, (x, v)) in positions.iter_mut().zip(velocities.iter_mut()).enumerate() {
            for i in 0..dim {
                let r1 = s.uniform();
                let r2 = s.uniform();
                let vi = params.inertia * v[i]
                    + params.cognitive * r1 * (personal[j][i] - x[i])
                    + params.social * r2 * (global[i] - x[i]);
                v[i] = vi.clamp(-vmax[i], vmax[i]);
                x[i] += v[i];
            }
        }
        fitness = s.evaluate(&mut positions);
        for j in 0..positions.len() {
            if fitness[j] < personal_fit[j] {
                personal_fit[j] = fitness[j];
                personal[j].clone_from(&positions[j]);
            }
        }
        s.end_iteration();
    }
}
