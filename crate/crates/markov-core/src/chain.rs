use crate::StochasticKernel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Samples a trajectory of `steps` transitions starting at `x0`.
///
/// Uses a ChaCha8 stream seeded with `seed`, so equal arguments give
/// bit-identical trajectories on every platform. The returned vector has
/// `steps + 1` entries.
pub fn classical_chain_sample(kernel: &StochasticKernel, x0: usize, steps: usize, seed: u64) -> Vec<usize> {
    let n = kernel.dim();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|x| {
            let mut acc = 0.0;
            (0..n)
                .filter_map(|y| {
                    let p = kernel.matrix[(x, y)];
                    (p > 0.0).then(|| {
                        acc += p;
                        (y, acc)
                    })
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut traj = Vec::with_capacity(steps + 1);
    let mut x = x0;
    traj.push(x);
    for _ in 0..steps {
        let u: f64 = rng.gen();
        let row = &rows[x];
        let total = row.last().map_or(1.0, |r| r.1);
        x = row
            .iter()
            .find(|(_, c)| u * total < *c)
            .or(row.last())
            .map_or(x, |r| r.0);
        traj.push(x);
    }
    traj
}
