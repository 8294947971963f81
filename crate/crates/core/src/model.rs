//! Fuel cost, emission, transmission loss and constraint residuals.

use crate::error::Result;
use crate::system::{
    CogenUnit, DispatchVector, HeatOnlyUnit, LossModel, PowerOnlyUnit, SystemDefinition,
};

impl PowerOnlyUnit {
    /// Fuel cost including the rectified-sine valve-point ripple.
    pub fn cost(&self, p: f64) -> f64 {
        self.cost_a
            + self.cost_b * p
            + self.cost_d * p * p
            + self.cost_cubic * p * p * p
            + (self.valve_e * (self.valve_f * (self.p_min - p)).sin()).abs()
    }

    pub fn emission(&self, p: f64) -> f64 {
        self.em_mu
            + self.em_kappa * p
            + self.em_pi * p * p
            + self.em_sigma * (self.em_nu * p).exp()
            + self.em_co2_theta * p
    }
}

impl CogenUnit {
    pub fn cost(&self, o: f64, h: f64) -> f64 {
        self.cost_alpha
            + self.cost_beta * o
            + self.cost_gamma * o * o
            + self.cost_delta * h
            + self.cost_eps * h * h
            + self.cost_xi * o * h
    }

    pub fn emission(&self, o: f64) -> f64 {
        (self.em_tau + self.em_co2_psi) * o
    }
}

impl HeatOnlyUnit {
    pub fn cost(&self, t: f64) -> f64 {
        self.cost_phi + self.cost_eta * t + self.cost_lambda * t * t
    }

    pub fn emission(&self, t: f64) -> f64 {
        (self.em_rho + self.em_co2_varpi) * t
    }
}

impl LossModel {
    /// Weight of the `(i, j)` product in the loss sum. Power-only/cogeneration
    /// cross products appear once in the loss formula (not twice as in a
    /// plain quadratic form), so they carry weight one half.
    fn pair_weight(i: usize, j: usize, n_power: usize) -> f64 {
        if (i < n_power) == (j < n_power) {
            1.0
        } else {
            0.5
        }
    }

    /// Loss for generation vector `g = (p, o)`; `n_power` is the number of
    /// power-only entries at the front of `g`.
    pub fn loss(&self, g: &[f64], n_power: usize) -> f64 {
        if !self.enabled {
            return 0.0;
        }
        let mut total = self.b00;
        for (i, row) in self.b_matrix.iter().enumerate() {
            let mut acc = 0.0;
            for (j, b) in row.iter().enumerate() {
                acc += Self::pair_weight(i, j, n_power) * b * g[j];
            }
            total += g[i] * acc + self.b0_vector[i] * g[i];
        }
        total
    }

    /// Partial derivatives of [`LossModel::loss`] with respect to each entry of `g`.
    pub fn gradient(&self, g: &[f64], n_power: usize) -> Vec<f64> {
        if !self.enabled {
            return vec![0.0; g.len()];
        }
        self.b_matrix
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let s: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(j, b)| {
                        Self::pair_weight(k, j, n_power) * (b + self.b_matrix[j][k]) * g[j]
                    })
                    .sum();
                s + self.b0_vector[k]
            })
            .collect()
    }
}

/// Full evaluation of one dispatch.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    pub emission: f64,
    pub loss: f64,
    pub power_residual: f64,
    pub heat_residual: f64,
    pub capacity_violation: f64,
}

/// Total fuel cost ($).
pub fn total_cost(x: &DispatchVector, sys: &SystemDefinition) -> Result<f64> {
    x.check(sys)?;
    Ok(cost_unchecked(x, sys))
}

fn cost_unchecked(x: &DispatchVector, sys: &SystemDefinition) -> f64 {
    let power: f64 = sys
        .power_units
        .iter()
        .zip(&x.p)
        .map(|(u, &p)| u.cost(p))
        .sum();
    let cogen: f64 = sys
        .cogen_units
        .iter()
        .zip(x.o.iter().zip(&x.h))
        .map(|(u, (&o, &h))| u.cost(o, h))
        .sum();
    let heat: f64 = sys
        .heat_units
        .iter()
        .zip(&x.t)
        .map(|(u, &t)| u.cost(t))
        .sum();
    power + cogen + heat
}

/// Total pollutant emission (kg): SO2/NOx terms plus the linear CO2 terms.
pub fn total_emission(x: &DispatchVector, sys: &SystemDefinition) -> Result<f64> {
    x.check(sys)?;
    Ok(emission_unchecked(x, sys))
}

fn emission_unchecked(x: &DispatchVector, sys: &SystemDefinition) -> f64 {
    let power: f64 = sys
        .power_units
        .iter()
        .zip(&x.p)
        .map(|(u, &p)| u.emission(p))
        .sum();
    let cogen: f64 = sys
        .cogen_units
        .iter()
        .zip(&x.o)
        .map(|(u, &o)| u.emission(o))
        .sum();
    let heat: f64 = sys
        .heat_units
        .iter()
        .zip(&x.t)
        .map(|(u, &t)| u.emission(t))
        .sum();
    power + cogen + heat
}

/// Transmission loss (MW); zero when the loss model is disabled.
pub fn transmission_loss(x: &DispatchVector, sys: &SystemDefinition) -> Result<f64> {
    x.check(sys)?;
    Ok(loss_unchecked(x, sys))
}

fn loss_unchecked(x: &DispatchVector, sys: &SystemDefinition) -> f64 {
    sys.loss.loss(&x.generation(), sys.power_units.len())
}

/// `(Σ power − P_D − P_L, Σ heat − H_D)`.
pub fn balance_residuals(x: &DispatchVector, sys: &SystemDefinition) -> Result<(f64, f64)> {
    x.check(sys)?;
    Ok(residuals_unchecked(x, sys, loss_unchecked(x, sys)))
}

fn residuals_unchecked(x: &DispatchVector, sys: &SystemDefinition, loss: f64) -> (f64, f64) {
    let power: f64 = x.p.iter().chain(&x.o).sum();
    let heat: f64 = x.h.iter().chain(&x.t).sum();
    (power - sys.power_demand - loss, heat - sys.heat_demand)
}

/// Sum of box exceedances plus each cogeneration point's distance to its region.
pub fn capacity_violation(x: &DispatchVector, sys: &SystemDefinition) -> Result<f64> {
    x.check(sys)?;
    Ok(capacity_unchecked(x, sys))
}

fn box_excess(v: f64, lo: f64, hi: f64) -> f64 {
    (lo - v).max(0.0) + (v - hi).max(0.0)
}

fn capacity_unchecked(x: &DispatchVector, sys: &SystemDefinition) -> f64 {
    let power: f64 = sys
        .power_units
        .iter()
        .zip(&x.p)
        .map(|(u, &p)| box_excess(p, u.p_min, u.p_max))
        .sum();
    let cogen: f64 = sys
        .cogen_units
        .iter()
        .zip(x.o.iter().zip(&x.h))
        .map(|(u, (&o, &h))| u.region.exceedance([o, h]))
        .sum();
    let heat: f64 = sys
        .heat_units
        .iter()
        .zip(&x.t)
        .map(|(u, &t)| box_excess(t, u.h_min, u.h_max))
        .sum();
    power + cogen + heat
}

/// Evaluates everything at once.
pub fn evaluate(x: &DispatchVector, sys: &SystemDefinition) -> Result<Evaluation> {
    x.check(sys)?;
    let loss = loss_unchecked(x, sys);
    let (power_residual, heat_residual) = residuals_unchecked(x, sys, loss);
    Ok(Evaluation {
        cost: cost_unchecked(x, sys),
        emission: emission_unchecked(x, sys),
        loss,
        power_residual,
        heat_residual,
        capacity_violation: capacity_unchecked(x, sys),
    })
}
