//! Hypervolume-difference indicator and the indicator-based fitness.
//!
//! Fitness is stored as `F(x) = Σ_{y≠x} exp(-I(y, x) / (c·κ))`, the negation
//! of the textbook sum, so that a larger value marks a worse individual and
//! environmental selection removes the maximum.

use super::dominance::weakly_dominates;
use super::hypervolume::hypervolume_2d;
use crate::constraint::VIOLATION_TOLERANCE;

/// Default reference point of the in-loop indicator on normalized
/// objectives: twice the pool's range, as in the original IBEA. A reference
/// hugging the pool (1.1) leaves the extreme members a sliver of exclusive
/// volume and the population collapses onto the knee.
pub const INDICATOR_REFERENCE: f64 = 2.0;

fn box_volume(x: &[f64], reference: f64) -> f64 {
    x.iter().map(|v| (reference - v).max(0.0)).product()
}

/// `I_HD({a}, {b})`: the volume `b` adds over `a`, or the volume `a` loses
/// against `b` when `a` weakly dominates it. Any number of objectives.
pub fn indicator_singleton(a: &[f64], b: &[f64], reference: f64) -> f64 {
    if weakly_dominates(a, b) {
        box_volume(b, reference) - box_volume(a, reference)
    } else {
        let overlap: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (reference - x.max(*y)).max(0.0))
            .product();
        box_volume(b, reference) - overlap
    }
}

/// Set form of the indicator for two-objective sets.
pub fn indicator_ihd(a: &[[f64; 2]], b: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let covered = b.iter().all(|q| a.iter().any(|p| weakly_dominates(p, q)));
    if covered {
        hypervolume_2d(b, reference) - hypervolume_2d(a, reference)
    } else {
        let union: Vec<[f64; 2]> = a.iter().chain(b).copied().collect();
        hypervolume_2d(&union, reference) - hypervolume_2d(a, reference)
    }
}

/// Min-max normalization bounds over a pool.
///
/// Bounds come from the feasible members when there are any, so a single
/// heavily penalized candidate cannot compress the feasible part of the pool.
pub fn pool_bounds(objectives: &[Vec<f64>], violations: &[f64]) -> Vec<(f64, f64)> {
    let m = objectives.first().map_or(0, Vec::len);
    let any_feasible = violations.iter().any(|&v| v <= VIOLATION_TOLERANCE);
    let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); m];
    for (obj, &v) in objectives.iter().zip(violations) {
        if any_feasible && v > VIOLATION_TOLERANCE {
            continue;
        }
        for (b, &x) in bounds.iter_mut().zip(obj) {
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
        }
    }
    bounds
}

pub fn normalize(x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    x.iter()
        .zip(bounds)
        .map(|(&v, &(lo, hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
        .collect()
}

/// Pairwise indicator values and fitness for a pool, updated incrementally
/// as members are removed.
#[derive(Debug, Clone)]
pub struct FitnessTable {
    /// `indicator[i][j] = I({x_i}, {x_j})` on normalized objectives.
    indicator: Vec<Vec<f64>>,
    scale: f64,
    kappa: f64,
    fitness: Vec<f64>,
    alive: Vec<bool>,
}

impl FitnessTable {
    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn alive(&self) -> &[bool] {
        &self.alive
    }

    /// `max |I|` over the pool, 1 when every value is zero.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn indicator(&self, i: usize, j: usize) -> f64 {
        self.indicator[i][j]
    }

    fn contribution(&self, from: usize, to: usize) -> f64 {
        (-self.indicator[from][to] / (self.scale * self.kappa)).exp()
    }

    /// Alive member with the largest fitness, lowest index on ties.
    pub fn worst(&self) -> Option<usize> {
        let mut worst: Option<usize> = None;
        for i in (0..self.fitness.len()).filter(|&i| self.alive[i]) {
            if worst.is_none_or(|w| self.fitness[i] > self.fitness[w]) {
                worst = Some(i);
            }
        }
        worst
    }

    /// Drops `r` and subtracts its contribution from every remaining member.
    pub fn remove(&mut self, r: usize) {
        assert!(self.alive[r], "member {r} already removed");
        self.alive[r] = false;
        for i in 0..self.fitness.len() {
            if self.alive[i] {
                self.fitness[i] -= self.contribution(r, i);
            }
        }
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }
}

/// Builds the fitness table of a pool of objective vectors.
pub fn assign_fitness(
    objectives: &[Vec<f64>],
    violations: &[f64],
    kappa: f64,
    reference: f64,
) -> FitnessTable {
    let n = objectives.len();
    let bounds = pool_bounds(objectives, violations);
    let normalized: Vec<Vec<f64>> = objectives.iter().map(|o| normalize(o, &bounds)).collect();
    let mut indicator = vec![vec![0.0; n]; n];
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = indicator_singleton(&normalized[i], &normalized[j], reference);
                indicator[i][j] = v;
                scale = scale.max(v.abs());
            }
        }
    }
    if scale == 0.0 {
        scale = 1.0;
    }
    let mut table = FitnessTable {
        indicator,
        scale,
        kappa,
        fitness: vec![0.0; n],
        alive: vec![true; n],
    };
    for j in 0..n {
        table.fitness[j] = (0..n)
            .filter(|&i| i != j)
            .map(|i| table.contribution(i, j))
            .sum();
    }
    table
}

/// Removes the worst member until `target` remain; returns the survivors in
/// their original order.
pub fn environmental_selection(table: &mut FitnessTable, target: usize) -> Vec<usize> {
    while table.alive_count() > target {
        let worst = table.worst().expect("pool is non-empty while above target");
        table.remove(worst);
    }
    (0..table.alive.len()).filter(|&i| table.alive[i]).collect()
}
