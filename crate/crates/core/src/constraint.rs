//! Feasibility repair and penalty aggregation.
//!
//! Repair clamps every unit into its box or operating region, then closes the
//! heat balance and the loss-coupled power balance by moving slack units. The
//! designated slack moves first; once it saturates the remaining imbalance is
//! pushed onto the other units of the same kind and finally onto cogeneration
//! units along their feasible interval, so the region constraints stay intact.
//! Whatever imbalance is left after every unit saturates is penalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, Evaluation};
use crate::system::{DispatchVector, SystemDefinition};

/// Violation components below this are treated as exactly satisfied.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    RepairThenPenalty,
    PenaltyOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstraintConfig {
    pub mode: ConstraintMode,
    /// Power-only unit absorbing the power imbalance; `None` picks the largest.
    pub power_slack_index: Option<usize>,
    /// Heat-only unit absorbing the heat imbalance; `None` picks the largest.
    pub heat_slack_index: Option<usize>,
    pub loss_fixed_point_tol: f64,
    pub loss_fixed_point_max_iters: usize,
    pub penalty_weight: f64,
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        ConstraintConfig {
            mode: ConstraintMode::RepairThenPenalty,
            power_slack_index: None,
            heat_slack_index: None,
            loss_fixed_point_tol: 1e-6,
            loss_fixed_point_max_iters: 50,
            penalty_weight: 1e4,
        }
    }
}

impl ConstraintConfig {
    pub fn validate(&self, sys: &SystemDefinition) -> Result<()> {
        if !(self.loss_fixed_point_tol > 0.0) {
            return Err(Error::Config(
                "loss_fixed_point_tol must be positive".into(),
            ));
        }
        if self.loss_fixed_point_max_iters < 1 {
            return Err(Error::Config(
                "loss_fixed_point_max_iters must be at least 1".into(),
            ));
        }
        if !(self.penalty_weight >= 0.0) || !self.penalty_weight.is_finite() {
            return Err(Error::Config(
                "penalty_weight must be finite and non-negative".into(),
            ));
        }
        if let Some(i) = self.power_slack_index {
            if i >= sys.power_units.len() {
                return Err(Error::Config(format!(
                    "power_slack_index {i} out of range ({} power-only units)",
                    sys.power_units.len()
                )));
            }
        }
        if let Some(i) = self.heat_slack_index {
            if i >= sys.heat_units.len() {
                return Err(Error::Config(format!(
                    "heat_slack_index {i} out of range ({} heat-only units)",
                    sys.heat_units.len()
                )));
            }
        }
        Ok(())
    }

    fn power_slack(&self, sys: &SystemDefinition) -> Option<usize> {
        self.power_slack_index
            .or_else(|| argmax_first(sys.power_units.iter().map(|u| u.capacity())))
    }

    fn heat_slack(&self, sys: &SystemDefinition) -> Option<usize> {
        self.heat_slack_index
            .or_else(|| argmax_first(sys.heat_units.iter().map(|u| u.capacity())))
    }
}

fn argmax_first(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Indices ordered by descending capacity, stable on ties.
fn by_capacity(capacities: impl Iterator<Item = f64>) -> Vec<usize> {
    let caps: Vec<f64> = capacities.collect();
    let mut order: Vec<usize> = (0..caps.len()).collect();
    order.sort_by(|&a, &b| caps[b].total_cmp(&caps[a]));
    order
}

/// Result of [`repair`].
#[derive(Debug, Clone, PartialEq)]
pub struct Repaired {
    pub vector: DispatchVector,
    /// `false` when the loss fixed point hit its iteration cap.
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Copy)]
enum PowerUnit {
    PowerOnly(usize),
    Cogen(usize),
}

#[derive(Clone, Copy)]
enum HeatUnit {
    HeatOnly(usize),
    Cogen(usize),
}

/// Moves `x` into the unit limits and closes the balance equations where the
/// units have room to do so.
pub fn repair(
    x: &DispatchVector,
    sys: &SystemDefinition,
    cfg: &ConstraintConfig,
) -> Result<Repaired> {
    x.check(sys)?;
    cfg.validate(sys)?;
    let mut v = x.clone();

    // (a) limits
    for (p, u) in v.p.iter_mut().zip(&sys.power_units) {
        *p = p.clamp(u.p_min, u.p_max);
    }
    for (t, u) in v.t.iter_mut().zip(&sys.heat_units) {
        *t = t.clamp(u.h_min, u.h_max);
    }
    for (j, u) in sys.cogen_units.iter().enumerate() {
        let [o, h] = u.region.project([v.o[j], v.h[j]]);
        v.o[j] = o;
        v.h[j] = h;
    }

    // (b) heat balance
    let mut heat_order: Vec<HeatUnit> = Vec::new();
    let heat_slack = cfg.heat_slack(sys);
    heat_order.extend(heat_slack.map(HeatUnit::HeatOnly));
    heat_order.extend(
        by_capacity(sys.heat_units.iter().map(|u| u.capacity()))
            .into_iter()
            .filter(|&k| Some(k) != heat_slack)
            .map(HeatUnit::HeatOnly),
    );
    heat_order.extend(
        by_capacity(
            sys.cogen_units
                .iter()
                .map(|u| u.region.heat_range().width()),
        )
        .into_iter()
        .map(HeatUnit::Cogen),
    );
    let mut residual: f64 = v.h.iter().chain(&v.t).sum::<f64>() - sys.heat_demand;
    for unit in heat_order {
        if residual == 0.0 {
            break;
        }
        let (slot, lo, hi) = match unit {
            HeatUnit::HeatOnly(k) => (
                &mut v.t[k],
                sys.heat_units[k].h_min,
                sys.heat_units[k].h_max,
            ),
            HeatUnit::Cogen(j) => {
                let Some(range) = sys.cogen_units[j].region.heat_bounds_at_power(v.o[j]) else {
                    continue;
                };
                (&mut v.h[j], range.lo, range.hi)
            }
        };
        let new = (*slot - residual).clamp(lo, hi);
        residual += new - *slot;
        *slot = new;
    }

    // (c) power balance with the loss fixed point
    let np = sys.power_units.len();
    let mut power_order: Vec<PowerUnit> = Vec::new();
    let power_slack = cfg.power_slack(sys);
    power_order.extend(power_slack.map(PowerUnit::PowerOnly));
    power_order.extend(
        by_capacity(sys.power_units.iter().map(|u| u.capacity()))
            .into_iter()
            .filter(|&i| Some(i) != power_slack)
            .map(PowerUnit::PowerOnly),
    );
    power_order.extend(
        by_capacity(
            sys.cogen_units
                .iter()
                .map(|u| u.region.power_range().width()),
        )
        .into_iter()
        .map(PowerUnit::Cogen),
    );

    let power_residual = |v: &DispatchVector| -> f64 {
        let g = v.generation();
        g.iter().sum::<f64>() - sys.power_demand - sys.loss.loss(&g, np)
    };
    let mut best = (power_residual(&v).abs(), v.clone());
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.loss_fixed_point_max_iters {
        iterations += 1;
        let g = v.generation();
        let grad = sys.loss.gradient(&g, np);
        let mut residual = g.iter().sum::<f64>() - sys.power_demand - sys.loss.loss(&g, np);
        let mut moved = 0.0;
        for unit in &power_order {
            if residual == 0.0 {
                break;
            }
            let (slot, lo, hi, sensitivity) = match *unit {
                PowerUnit::PowerOnly(i) => {
                    let u = &sys.power_units[i];
                    (&mut v.p[i], u.p_min, u.p_max, 1.0 - grad[i])
                }
                PowerUnit::Cogen(j) => {
                    let Some(range) = sys.cogen_units[j].region.power_bounds_at_heat(v.h[j]) else {
                        continue;
                    };
                    (&mut v.o[j], range.lo, range.hi, 1.0 - grad[np + j])
                }
            };
            if sensitivity <= 0.0 {
                continue;
            }
            let new = (*slot - residual / sensitivity).clamp(lo, hi);
            residual += sensitivity * (new - *slot);
            moved += (new - *slot).abs();
            *slot = new;
        }
        let r = power_residual(&v).abs();
        if r < best.0 {
            best = (r, v.clone());
        }
        if moved < cfg.loss_fixed_point_tol {
            converged = true;
            break;
        }
    }
    let vector = if converged { v } else { best.1 };
    Ok(Repaired {
        vector,
        converged,
        iterations,
    })
}

/// Penalized objective values of one dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenalizedObjectives {
    pub cost: f64,
    pub emission: f64,
    /// `|power residual| + |heat residual| + capacity violation`, each term
    /// zeroed below [`VIOLATION_TOLERANCE`].
    pub violation: f64,
    pub evaluation: Evaluation,
}

fn significant(v: f64) -> f64 {
    if v.abs() < VIOLATION_TOLERANCE {
        0.0
    } else {
        v.abs()
    }
}

/// Raw objectives plus `penalty_weight × violation`, evaluated on `x` as given.
pub fn penalized_objectives(
    x: &DispatchVector,
    sys: &SystemDefinition,
    cfg: &ConstraintConfig,
) -> Result<PenalizedObjectives> {
    let evaluation = model::evaluate(x, sys)?;
    let violation = significant(evaluation.power_residual)
        + significant(evaluation.heat_residual)
        + significant(evaluation.capacity_violation);
    let penalty = cfg.penalty_weight * violation;
    Ok(PenalizedObjectives {
        cost: evaluation.cost + penalty,
        emission: evaluation.emission + penalty,
        violation,
        evaluation,
    })
}

/// Repairs (unless in penalty-only mode) and evaluates a candidate.
pub fn evaluate_candidate(
    x: &DispatchVector,
    sys: &SystemDefinition,
    cfg: &ConstraintConfig,
) -> Result<(DispatchVector, PenalizedObjectives)> {
    let vector = match cfg.mode {
        ConstraintMode::RepairThenPenalty => repair(x, sys, cfg)?.vector,
        ConstraintMode::PenaltyOnly => x.clone(),
    };
    let objectives = penalized_objectives(&vector, sys, cfg)?;
    Ok((vector, objectives))
}
