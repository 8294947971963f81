//! Final fronts produced by the engines.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::system::{DispatchVector, SystemDefinition};

/// One member of a final front. Objectives are raw model values; `violation`
/// is the aggregated constraint violation of `genes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub cost: f64,
    pub emission: f64,
    pub violation: f64,
    /// Decision vector in `p, o, h, t` order.
    pub genes: Vec<f64>,
}

impl FrontPoint {
    pub fn objectives(&self) -> [f64; 2] {
        [self.cost, self.emission]
    }

    pub fn dispatch(&self, sys: &SystemDefinition) -> Result<DispatchVector> {
        DispatchVector::from_genes(sys, &self.genes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontArchive {
    pub system_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub run_id: String,
    /// Objective evaluations spent by the run.
    pub evaluations: usize,
    pub points: Vec<FrontPoint>,
}

impl FrontArchive {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(FrontPoint::objectives).collect()
    }

    pub fn min_cost(&self) -> Option<&FrontPoint> {
        self.points.iter().min_by(|a, b| a.cost.total_cmp(&b.cost))
    }

    pub fn min_emission(&self) -> Option<&FrontPoint> {
        self.points
            .iter()
            .min_by(|a, b| a.emission.total_cmp(&b.emission))
    }

    /// The "middle" member: objectives are min-max normalized over the front
    /// and the point with the smallest larger normalized objective wins.
    /// Ties go to the lower cost.
    pub fn compromise(&self) -> Option<&FrontPoint> {
        let objs = self.objectives();
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &objs {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let scaled = |v: f64, k: usize| {
            if hi[k] > lo[k] {
                (v - lo[k]) / (hi[k] - lo[k])
            } else {
                0.0
            }
        };
        let score = |p: &FrontPoint| scaled(p.cost, 0).max(scaled(p.emission, 1));
        self.points.iter().min_by(|a, b| {
            score(a)
                .total_cmp(&score(b))
                .then(a.cost.total_cmp(&b.cost))
        })
    }
}
