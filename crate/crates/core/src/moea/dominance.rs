//! Pareto and constrained dominance.

use std::cmp::Ordering;

use crate::constraint::VIOLATION_TOLERANCE;
use crate::error::{Error, Result};

/// `a` Pareto-dominates `b` under minimization.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    Error::check_len("objective vector", a.len(), b.len())?;
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// `a` weakly dominates `b`: no worse in every objective.
pub(crate) fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Constraint-domination: a smaller violation wins outright; between equally
/// violating (in particular feasible) candidates Pareto dominance decides.
pub fn constrained_dominates(a: &[f64], va: f64, b: &[f64], vb: f64) -> Result<bool> {
    Error::check_len("objective vector", a.len(), b.len())?;
    Ok(constrained_dominates_unchecked(a, va, b, vb))
}

pub(crate) fn constrained_dominates_unchecked(a: &[f64], va: f64, b: &[f64], vb: f64) -> bool {
    let va = if va <= VIOLATION_TOLERANCE { 0.0 } else { va };
    let vb = if vb <= VIOLATION_TOLERANCE { 0.0 } else { vb };
    match va.total_cmp(&vb) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => dominates_unchecked(a, b),
    }
}
