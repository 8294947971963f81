//! Empirical attainment surfaces for two objectives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The `level`% attainment surface as its minimal points, sorted by
/// ascending first objective (and so descending second).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainmentSurface {
    pub level: f64,
    /// Number of runs that must attain a point for it to lie on the surface.
    pub runs_required: usize,
    pub points: Vec<[f64; 2]>,
}

impl AttainmentSurface {
    /// Whether `z` is attained at this level.
    pub fn attains(&self, z: [f64; 2]) -> bool {
        self.points.iter().any(|p| p[0] <= z[0] && p[1] <= z[1])
    }
}

/// How many runs weakly dominate `z`.
pub fn attainment_counts(runs: &[Vec<[f64; 2]>], z: [f64; 2]) -> usize {
    runs.iter()
        .filter(|run| run.iter().any(|p| p[0] <= z[0] && p[1] <= z[1]))
        .count()
}

/// Attainment surfaces of `runs` at each percentage in `levels`.
///
/// A point lies in the `k`% region when at least `⌈k·R/100⌉` of the `R`
/// runs weakly dominate it.
pub fn eaf_surfaces(runs: &[Vec<[f64; 2]>], levels: &[f64]) -> Result<Vec<AttainmentSurface>> {
    if runs.len() < 2 {
        return Err(Error::Input(format!(
            "attainment surfaces need at least 2 runs, got {}",
            runs.len()
        )));
    }
    if let Some(bad) = levels.iter().find(|&&k| !(k > 0.0 && k <= 100.0)) {
        return Err(Error::Input(format!(
            "attainment level {bad} outside (0, 100]"
        )));
    }
    let mut xs: Vec<f64> = runs.iter().flatten().map(|p| p[0]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    // best second objective per run among points with first objective ≤ x,
    // swept over the candidate x values
    let mut sorted_runs: Vec<Vec<[f64; 2]>> = runs.to_vec();
    for run in &mut sorted_runs {
        run.sort_by(|a, b| a[0].total_cmp(&b[0]));
    }
    let mut cursor = vec![0usize; runs.len()];
    let mut best = vec![f64::INFINITY; runs.len()];
    let mut columns: Vec<(f64, Vec<f64>)> = Vec::with_capacity(xs.len());
    for &x in &xs {
        for (r, run) in sorted_runs.iter().enumerate() {
            while cursor[r] < run.len() && run[cursor[r]][0] <= x {
                best[r] = best[r].min(run[cursor[r]][1]);
                cursor[r] += 1;
            }
        }
        let mut column = best.clone();
        column.sort_by(f64::total_cmp);
        columns.push((x, column));
    }

    let total = runs.len();
    Ok(levels
        .iter()
        .map(|&level| {
            let required = ((level * total as f64 / 100.0).ceil() as usize).clamp(1, total);
            let mut points = Vec::new();
            let mut last = f64::INFINITY;
            for (x, column) in &columns {
                let y = column[required - 1];
                if y < last {
                    points.push([*x, y]);
                    last = y;
                }
            }
            AttainmentSurface {
                level,
                runs_required: required,
                points,
            }
        })
        .collect())
}
