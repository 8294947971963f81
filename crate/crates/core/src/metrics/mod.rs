//! Post-hoc quality measures for final fronts.

mod eaf;
mod wilcoxon;

pub use eaf::{attainment_counts, eaf_surfaces, AttainmentSurface};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult};

use serde::{Deserialize, Serialize};

use crate::archive::FrontArchive;
use crate::error::{Error, Result};
use crate::moea::hypervolume_2d;

/// Reference point for the normalized hypervolume.
pub const HV_REFERENCE: [f64; 2] = [1.1, 1.1];

/// Per-objective `(min, max)` mapping raw objectives onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBounds {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl NormalizationBounds {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        for k in 0..2 {
            if !(min[k].is_finite() && max[k].is_finite() && min[k] < max[k]) {
                return Err(Error::Input(format!(
                    "normalization bounds need min < max on objective {k}, got {} and {}",
                    min[k], max[k]
                )));
            }
        }
        Ok(NormalizationBounds { min, max })
    }

    /// Componentwise extremes over the union of the given fronts.
    pub fn from_fronts<'a>(fronts: impl IntoIterator<Item = &'a FrontArchive>) -> Result<Self> {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for front in fronts {
            for p in front.objectives() {
                for k in 0..2 {
                    min[k] = min[k].min(p[k]);
                    max[k] = max[k].max(p[k]);
                }
            }
        }
        Self::new(min, max)
    }

    pub fn normalize(&self, p: [f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.min[0]) / (self.max[0] - self.min[0]),
            (p[1] - self.min[1]) / (self.max[1] - self.min[1]),
        ]
    }
}

fn normalized_points(points: &[[f64; 2]], bounds: &NormalizationBounds) -> Vec<[f64; 2]> {
    points.iter().map(|&p| bounds.normalize(p)).collect()
}

/// Normalized hypervolume of raw objective points; points that fall
/// outside `[0, 1]²` after normalization are discarded.
pub fn hv_points(points: &[[f64; 2]], bounds: &NormalizationBounds) -> f64 {
    let inside: Vec<[f64; 2]> = normalized_points(points, bounds)
        .into_iter()
        .filter(|p| p.iter().all(|v| (0.0..=1.0).contains(v)))
        .collect();
    hypervolume_2d(&inside, HV_REFERENCE)
}

pub fn hv_metric(front: &FrontArchive, bounds: &NormalizationBounds) -> f64 {
    hv_points(&front.objectives(), bounds)
}

/// Deb's spread of raw objective points; `None` for fewer than two points.
///
/// The extreme references are the corners `(0, 1)` and `(1, 0)` of the
/// normalized box.
pub fn spread_points(points: &[[f64; 2]], bounds: &NormalizationBounds) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut pts = normalized_points(points, bounds);
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(b[1].total_cmp(&a[1])));
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let gaps: Vec<f64> = pts.windows(2).map(|w| dist(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let d_first = dist(pts[0], [0.0, 1.0]);
    let d_last = dist(pts[pts.len() - 1], [1.0, 0.0]);
    let deviation: f64 = gaps.iter().map(|d| (d - mean).abs()).sum();
    let denominator = d_first + d_last + gaps.len() as f64 * mean;
    if denominator == 0.0 {
        return Some(0.0);
    }
    Some((d_first + d_last + deviation) / denominator)
}

pub fn spread_delta(front: &FrontArchive, bounds: &NormalizationBounds) -> Option<f64> {
    spread_points(&front.objectives(), bounds)
}
