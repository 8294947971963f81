//! Dispatch problem definitions and the JSON system-file schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::ForPolygon;

/// Thermal unit producing power only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerOnlyUnit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p_min: f64,
    pub p_max: f64,
    pub cost_a: f64,
    pub cost_b: f64,
    pub cost_d: f64,
    /// Cubic fuel-cost coefficient; only the five-unit benchmark uses it.
    #[serde(default)]
    pub cost_cubic: f64,
    #[serde(default)]
    pub valve_e: f64,
    #[serde(default)]
    pub valve_f: f64,
    #[serde(default)]
    pub em_mu: f64,
    #[serde(default)]
    pub em_kappa: f64,
    #[serde(default)]
    pub em_pi: f64,
    #[serde(default)]
    pub em_sigma: f64,
    #[serde(default)]
    pub em_nu: f64,
    #[serde(default)]
    pub em_co2_theta: f64,
}

impl PowerOnlyUnit {
    pub fn capacity(&self) -> f64 {
        self.p_max - self.p_min
    }
}

/// Cogeneration unit with a coupled heat–power operating region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CogenUnit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub cost_alpha: f64,
    pub cost_beta: f64,
    pub cost_gamma: f64,
    pub cost_delta: f64,
    pub cost_eps: f64,
    pub cost_xi: f64,
    #[serde(default)]
    pub em_tau: f64,
    #[serde(default)]
    pub em_co2_psi: f64,
    pub region: ForPolygon,
}

/// Boiler producing heat only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatOnlyUnit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub h_min: f64,
    pub h_max: f64,
    pub cost_phi: f64,
    pub cost_eta: f64,
    pub cost_lambda: f64,
    #[serde(default)]
    pub em_rho: f64,
    #[serde(default)]
    pub em_co2_varpi: f64,
}

impl HeatOnlyUnit {
    pub fn capacity(&self) -> f64 {
        self.h_max - self.h_min
    }
}

/// B-coefficient transmission loss model over the power-producing units
/// (power-only first, then cogeneration). Coefficients are stored already
/// scaled to MW units.
#[derive(Debug, Clone, PartialEq)]
pub struct LossModel {
    pub enabled: bool,
    pub b_matrix: Vec<Vec<f64>>,
    pub b0_vector: Vec<f64>,
    pub b00: f64,
}

impl LossModel {
    pub fn disabled() -> Self {
        LossModel {
            enabled: false,
            b_matrix: Vec::new(),
            b0_vector: Vec::new(),
            b00: 0.0,
        }
    }

    pub fn new(b_matrix: Vec<Vec<f64>>, b0_vector: Vec<f64>, b00: f64) -> Self {
        LossModel {
            enabled: true,
            b_matrix,
            b0_vector,
            b00,
        }
    }

    fn validate(&self, generators: usize) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        if self.b_matrix.len() != generators {
            return Err(Error::system(
                "loss.b",
                format!(
                    "expected {generators} rows (power-only + cogeneration units), got {}",
                    self.b_matrix.len()
                ),
            ));
        }
        for (i, row) in self.b_matrix.iter().enumerate() {
            if row.len() != generators {
                return Err(Error::system(
                    format!("loss.b[{i}]"),
                    format!("expected {generators} columns, got {}", row.len()),
                ));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::system(
                    format!("loss.b[{i}]"),
                    "non-finite coefficient",
                ));
            }
        }
        for i in 0..generators {
            for j in 0..i {
                if (self.b_matrix[i][j] - self.b_matrix[j][i]).abs() > 1e-12 {
                    return Err(Error::system(
                        format!("loss.b[{i}][{j}]"),
                        "matrix is not symmetric",
                    ));
                }
            }
        }
        if self.b0_vector.len() != generators {
            return Err(Error::system(
                "loss.b0",
                format!(
                    "expected {generators} entries, got {}",
                    self.b0_vector.len()
                ),
            ));
        }
        if !self.b00.is_finite() || self.b0_vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::system("loss.b0", "non-finite coefficient"));
        }
        Ok(())
    }
}

/// A complete dispatch problem. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDefinition {
    pub name: String,
    pub power_units: Vec<PowerOnlyUnit>,
    pub cogen_units: Vec<CogenUnit>,
    pub heat_units: Vec<HeatOnlyUnit>,
    pub power_demand: f64,
    pub heat_demand: f64,
    pub loss: LossModel,
}

/// One candidate setpoint per unit.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DispatchVector {
    /// Power of each power-only unit (MW).
    pub p: Vec<f64>,
    /// Power of each cogeneration unit (MW).
    pub o: Vec<f64>,
    /// Heat of each cogeneration unit (MWth).
    pub h: Vec<f64>,
    /// Heat of each heat-only unit (MWth).
    pub t: Vec<f64>,
}

impl DispatchVector {
    pub fn zeros(sys: &SystemDefinition) -> Self {
        DispatchVector {
            p: vec![0.0; sys.power_units.len()],
            o: vec![0.0; sys.cogen_units.len()],
            h: vec![0.0; sys.cogen_units.len()],
            t: vec![0.0; sys.heat_units.len()],
        }
    }

    /// Checks lengths against `sys` and finiteness of every entry.
    pub fn check(&self, sys: &SystemDefinition) -> Result<()> {
        Error::check_len("power-only setpoints", sys.power_units.len(), self.p.len())?;
        Error::check_len(
            "cogeneration power setpoints",
            sys.cogen_units.len(),
            self.o.len(),
        )?;
        Error::check_len(
            "cogeneration heat setpoints",
            sys.cogen_units.len(),
            self.h.len(),
        )?;
        Error::check_len("heat-only setpoints", sys.heat_units.len(), self.t.len())?;
        if self.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input(
                "dispatch vector contains a non-finite entry".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.p.len() + self.o.len() + self.h.len() + self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Genes in the order `p, o, h, t`.
    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.p.iter().chain(&self.o).chain(&self.h).chain(&self.t)
    }

    pub fn to_genes(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }

    pub fn from_genes(sys: &SystemDefinition, genes: &[f64]) -> Result<Self> {
        let (np, nc, nh) = (
            sys.power_units.len(),
            sys.cogen_units.len(),
            sys.heat_units.len(),
        );
        Error::check_len("gene vector", np + 2 * nc + nh, genes.len())?;
        let (p, rest) = genes.split_at(np);
        let (o, rest) = rest.split_at(nc);
        let (h, t) = rest.split_at(nc);
        Ok(DispatchVector {
            p: p.to_vec(),
            o: o.to_vec(),
            h: h.to_vec(),
            t: t.to_vec(),
        })
    }

    /// Concatenated power generation `(p, o)`, the argument of the loss model.
    pub fn generation(&self) -> Vec<f64> {
        self.p.iter().chain(&self.o).copied().collect()
    }
}

impl SystemDefinition {
    /// Validates every unit and the loss model.
    pub fn validate(&self) -> Result<()> {
        if self.power_units.is_empty() && self.cogen_units.is_empty() && self.heat_units.is_empty()
        {
            return Err(Error::system("units", "at least one unit is required"));
        }
        if !(self.power_demand >= 0.0) || !self.power_demand.is_finite() {
            return Err(Error::system(
                "demand.power",
                "must be finite and non-negative",
            ));
        }
        if !(self.heat_demand >= 0.0) || !self.heat_demand.is_finite() {
            return Err(Error::system(
                "demand.heat",
                "must be finite and non-negative",
            ));
        }
        for (i, u) in self.power_units.iter().enumerate() {
            let coeffs = [
                u.p_min,
                u.p_max,
                u.cost_a,
                u.cost_b,
                u.cost_d,
                u.cost_cubic,
                u.valve_e,
                u.valve_f,
                u.em_mu,
                u.em_kappa,
                u.em_pi,
                u.em_sigma,
                u.em_nu,
                u.em_co2_theta,
            ];
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::system(
                    format!("power_units[{i}]"),
                    "non-finite coefficient",
                ));
            }
            if !(0.0 <= u.p_min && u.p_min < u.p_max) {
                return Err(Error::system(
                    format!("power_units[{i}].p_min"),
                    "require 0 <= p_min < p_max",
                ));
            }
            if u.valve_e < 0.0 {
                return Err(Error::system(
                    format!("power_units[{i}].valve_e"),
                    "valve-point amplitude must be non-negative",
                ));
            }
        }
        for (i, u) in self.cogen_units.iter().enumerate() {
            let coeffs = [
                u.cost_alpha,
                u.cost_beta,
                u.cost_gamma,
                u.cost_delta,
                u.cost_eps,
                u.cost_xi,
                u.em_tau,
                u.em_co2_psi,
            ];
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::system(
                    format!("cogen_units[{i}]"),
                    "non-finite coefficient",
                ));
            }
        }
        for (i, u) in self.heat_units.iter().enumerate() {
            let coeffs = [
                u.h_min,
                u.h_max,
                u.cost_phi,
                u.cost_eta,
                u.cost_lambda,
                u.em_rho,
                u.em_co2_varpi,
            ];
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::system(
                    format!("heat_units[{i}]"),
                    "non-finite coefficient",
                ));
            }
            if !(0.0 <= u.h_min && u.h_min < u.h_max) {
                return Err(Error::system(
                    format!("heat_units[{i}].h_min"),
                    "require 0 <= h_min < h_max",
                ));
            }
        }
        self.loss
            .validate(self.power_units.len() + self.cogen_units.len())
    }

    /// Number of decision variables.
    pub fn dimension(&self) -> usize {
        self.power_units.len() + 2 * self.cogen_units.len() + self.heat_units.len()
    }

    /// Per-gene box bounds in `p, o, h, t` order. Cogeneration genes use
    /// the bounding box of the operating region.
    pub fn gene_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lower = Vec::with_capacity(self.dimension());
        let mut upper = Vec::with_capacity(self.dimension());
        for u in &self.power_units {
            lower.push(u.p_min);
            upper.push(u.p_max);
        }
        for u in &self.cogen_units {
            lower.push(u.region.power_range().lo);
            upper.push(u.region.power_range().hi);
        }
        for u in &self.cogen_units {
            lower.push(u.region.heat_range().lo);
            upper.push(u.region.heat_range().hi);
        }
        for u in &self.heat_units {
            lower.push(u.h_min);
            upper.push(u.h_max);
        }
        (lower, upper)
    }

    /// Column labels in gene order: `p1.., o1.., h1.., t1..`.
    pub fn gene_labels(&self) -> Vec<String> {
        let mut labels = Vec::with_capacity(self.dimension());
        labels.extend((1..=self.power_units.len()).map(|i| format!("p{i}")));
        labels.extend((1..=self.cogen_units.len()).map(|i| format!("o{i}")));
        labels.extend((1..=self.cogen_units.len()).map(|i| format!("h{i}")));
        labels.extend((1..=self.heat_units.len()).map(|i| format!("t{i}")));
        labels
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        file.into_system()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_json_str(&text)
    }
}

/// On-disk layout of a system definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub demand: DemandSection,
    #[serde(default)]
    pub power_units: Vec<PowerOnlyUnit>,
    #[serde(default)]
    pub cogen_units: Vec<CogenUnit>,
    #[serde(default)]
    pub heat_units: Vec<HeatOnlyUnit>,
    #[serde(default)]
    pub loss: LossSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandSection {
    pub power: f64,
    pub heat: f64,
}

/// Loss coefficients as printed, with their multipliers kept explicit.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossSection {
    pub enabled: bool,
    #[serde(default)]
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub b0: Vec<f64>,
    #[serde(default)]
    pub b00: f64,
    #[serde(default = "unit_scale")]
    pub scale_b: f64,
    #[serde(default = "unit_scale")]
    pub scale_b0: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl SystemFile {
    pub fn into_system(self) -> Result<SystemDefinition> {
        let loss = if self.loss.enabled {
            let LossSection {
                b,
                b0,
                b00,
                scale_b,
                scale_b0,
                ..
            } = self.loss;
            if !scale_b.is_finite() || !scale_b0.is_finite() {
                return Err(Error::system(
                    "loss.scale_b",
                    "scale factors must be finite",
                ));
            }
            LossModel::new(
                b.into_iter()
                    .map(|row| row.into_iter().map(|v| v * scale_b).collect())
                    .collect(),
                b0.into_iter().map(|v| v * scale_b0).collect(),
                b00,
            )
        } else {
            LossModel::disabled()
        };
        let sys = SystemDefinition {
            name: self.name,
            power_units: self.power_units,
            cogen_units: self.cogen_units,
            heat_units: self.heat_units,
            power_demand: self.demand.power,
            heat_demand: self.demand.heat,
            loss,
        };
        sys.validate()?;
        Ok(sys)
    }
}

/// The three benchmark systems shipped with the crate.
pub mod bundled {
    use super::SystemDefinition;

    pub const SYSTEM1_JSON: &str = include_str!("../data/system1.json");
    pub const SYSTEM2_JSON: &str = include_str!("../data/system2.json");
    pub const SYSTEM3_JSON: &str = include_str!("../data/system3.json");

    /// Four-unit cost-only benchmark (200 MW / 115 MWth).
    pub fn system1() -> SystemDefinition {
        SystemDefinition::from_json_str(SYSTEM1_JSON).expect("bundled system1 is valid")
    }

    /// Five-unit cost/emission benchmark (300 MW / 150 MWth).
    pub fn system2() -> SystemDefinition {
        SystemDefinition::from_json_str(SYSTEM2_JSON).expect("bundled system2 is valid")
    }

    /// Seven-unit benchmark with valve points and losses (600 MW / 150 MWth).
    pub fn system3() -> SystemDefinition {
        SystemDefinition::from_json_str(SYSTEM3_JSON).expect("bundled system3 is valid")
    }

    /// Looks up a bundled system by name (`system1`, `system2`, `system3`).
    pub fn by_name(name: &str) -> Option<SystemDefinition> {
        match name {
            "system1" => Some(system1()),
            "system2" => Some(system2()),
            "system3" => Some(system3()),
            _ => None,
        }
    }
}
