//! Seeded inputs shared by the benchmarks.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` mutually non-dominated points on a noisy convex curve in `[0, 1]²`.
pub fn convex_front(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.into_iter()
        .map(|x| [x, (1.0 - x.sqrt()).powi(2)])
        .collect()
}

/// A population of `n` two-objective vectors with a tenth infeasible.
pub fn population(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objectives = (0..n)
        .map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
        .collect();
    let violations = (0..n)
        .map(|i| {
            if i % 10 == 9 {
                rng.random_range(0.1..5.0)
            } else {
                0.0
            }
        })
        .collect();
    (objectives, violations)
}
