//! Mating selection and real-coded variation.

use rand::{Rng, RngExt};

const EPS: f64 = 1e-14;

/// Per-gene box bounds of the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// `rand(0,1)·(upper − lower) + lower` per gene.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.random::<f64>() * (hi - lo) + lo)
            .collect()
    }
}

/// Draws two members with replacement and returns the better one; the first
/// draw wins unless the second is strictly better.
pub fn binary_tournament<R, F>(len: usize, rng: &mut R, better: F) -> usize
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> bool,
{
    assert!(len > 0, "tournament over an empty archive");
    let a = rng.random_range(0..len);
    let b = rng.random_range(0..len);
    if better(b, a) {
        b
    } else {
        a
    }
}

fn sbx_betaq(rand: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if rand <= 1.0 / alpha {
        (rand * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - rand * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded simulated binary crossover. With probability `prob` a crossover
/// event occurs, and then each gene is recombined with probability 1/2.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    prob: f64,
    eta: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() > prob {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= EPS {
            continue;
        }
        let (lo, hi) = (bounds.lower[i], bounds.upper[i]);
        let (y1, y2) = if p1[i] < p2[i] {
            (p1[i], p2[i])
        } else {
            (p2[i], p1[i])
        };
        let rand = rng.random::<f64>();
        let q1 = sbx_betaq(rand, 1.0 + 2.0 * (y1 - lo) / (y2 - y1), eta);
        let q2 = sbx_betaq(rand, 1.0 + 2.0 * (hi - y2) / (y2 - y1), eta);
        let a = (0.5 * ((y1 + y2) - q1 * (y2 - y1))).clamp(lo, hi);
        let b = (0.5 * ((y1 + y2) + q2 * (y2 - y1))).clamp(lo, hi);
        if rng.random::<f64>() <= 0.5 {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation, each gene mutated with probability `prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &Bounds,
    prob: f64,
    eta: f64,
    rng: &mut R,
) {
    for (i, y) in x.iter_mut().enumerate() {
        if rng.random::<f64>() >= prob {
            continue;
        }
        let (lo, hi) = (bounds.lower[i], bounds.upper[i]);
        if hi <= lo {
            *y = lo;
            continue;
        }
        let d1 = (*y - lo) / (hi - lo);
        let d2 = (hi - *y) / (hi - lo);
        let rnd = rng.random::<f64>();
        let pow = 1.0 / (eta + 1.0);
        let dq = if rnd <= 0.5 {
            let v = 2.0 * rnd + (1.0 - 2.0 * rnd) * (1.0 - d1).powf(eta + 1.0);
            v.powf(pow) - 1.0
        } else {
            let v = 2.0 * (1.0 - rnd) + 2.0 * (rnd - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(pow)
        };
        *y = (*y + dq * (hi - lo)).clamp(lo, hi);
    }
}
