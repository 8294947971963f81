//! Tables derived from persisted runs. Everything here is a pure function
//! of the experiment directory, so re-emitting gives identical files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chpeed_core::constraint::{penalized_objectives, ConstraintConfig};
use chpeed_core::metrics::{
    eaf_surfaces, hv_metric, spread_delta, wilcoxon_signed_rank, NormalizationBounds,
};
use chpeed_core::model::evaluate;
use chpeed_core::{FrontArchive, FrontPoint};
use serde::Serialize;

use crate::config::Mode;
use crate::experiment::{Experiment, RunRecord};
use crate::store::{gene_labels, read_front_dir, write_atomic, Manifest, FRONTS, REPORTS};

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner().context("flushing csv")?)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_atomic(path, &csv_bytes(rows)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub system: String,
    pub algorithm: String,
    pub seed: u64,
    pub hv: f64,
    /// Empty for single-point fronts.
    pub spread: Option<f64>,
}

/// How normalization bounds are chosen.
#[derive(Debug, Clone)]
pub enum BoundsChoice {
    /// Extremes over every front being compared.
    Union,
    Fixed(NormalizationBounds),
}

impl BoundsChoice {
    /// `union`, or a path to a JSON file `{"min": [c, e], "max": [c, e]}`.
    pub fn parse(arg: &str) -> Result<BoundsChoice> {
        if arg == "union" {
            return Ok(BoundsChoice::Union);
        }
        let text =
            std::fs::read_to_string(arg).with_context(|| format!("reading bounds file {arg}"))?;
        let raw: NormalizationBounds =
            serde_json::from_str(&text).with_context(|| format!("parsing bounds file {arg}"))?;
        Ok(BoundsChoice::Fixed(NormalizationBounds::new(
            raw.min, raw.max,
        )?))
    }

    pub fn resolve<'a>(
        &self,
        fronts: impl IntoIterator<Item = &'a FrontArchive>,
    ) -> Result<NormalizationBounds> {
        match self {
            BoundsChoice::Union => Ok(NormalizationBounds::from_fronts(fronts)
                .context("fronts span no range in some objective")?),
            BoundsChoice::Fixed(b) => Ok(*b),
        }
    }
}

pub fn metrics_rows(records: &[&RunRecord], bounds: &NormalizationBounds) -> Vec<MetricsRow> {
    records
        .iter()
        .map(|r| MetricsRow {
            system: r.front.system_id.clone(),
            algorithm: r.algorithm.clone(),
            seed: r.seed,
            hv: hv_metric(&r.front, bounds),
            spread: spread_delta(&r.front, bounds),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub system: String,
    pub reference: String,
    pub other: String,
    pub metric: String,
    pub pairs: usize,
    /// Pairs where the reference is at least as good.
    pub reference_wins: usize,
    pub reference_mean: f64,
    pub other_mean: f64,
    pub w_plus: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// Paired comparison of two algorithms' metric rows, matched by seed.
/// Larger hypervolume and smaller spread count as better.
pub fn compare_rows(
    reference: &[MetricsRow],
    other: &[MetricsRow],
    alpha: f64,
) -> Result<Vec<ComparisonRow>> {
    let mut hv_pairs = Vec::new();
    let mut spread_pairs = Vec::new();
    for a in reference {
        if let Some(b) = other.iter().find(|b| b.seed == a.seed) {
            hv_pairs.push((a.hv, b.hv));
            if let (Some(x), Some(y)) = (a.spread, b.spread) {
                spread_pairs.push((x, y));
            }
        }
    }
    if hv_pairs.is_empty() {
        bail!("the two run sets share no seed");
    }
    let system = reference[0].system.clone();
    let row = |metric: &str, pairs: &[(f64, f64)], wins: usize| {
        let n = pairs.len().max(1) as f64;
        let test = wilcoxon_signed_rank(pairs, alpha);
        ComparisonRow {
            system: system.clone(),
            reference: reference[0].algorithm.clone(),
            other: other[0].algorithm.clone(),
            metric: metric.to_string(),
            pairs: pairs.len(),
            reference_wins: wins,
            reference_mean: pairs.iter().map(|p| p.0).sum::<f64>() / n,
            other_mean: pairs.iter().map(|p| p.1).sum::<f64>() / n,
            w_plus: test.w_plus,
            p_value: test.p_value,
            alpha,
            reject: test.reject,
        }
    };
    Ok(vec![
        row(
            "hv",
            &hv_pairs,
            hv_pairs.iter().filter(|p| p.0 >= p.1).count(),
        ),
        row(
            "spread",
            &spread_pairs,
            spread_pairs.iter().filter(|p| p.0 <= p.1).count(),
        ),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct EafRow {
    cost: f64,
    emission: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub system: String,
    pub algorithm: String,
    pub runs: usize,
    pub best_cost: f64,
    pub worst_cost: f64,
    pub mean_cost: f64,
    pub std_cost: f64,
    pub best_emission: f64,
    pub mean_front_size: f64,
    pub mean_time_s: f64,
    pub mean_hv: Option<f64>,
    pub mean_spread: Option<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for a single value.
fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub fn summary_rows(exp: &Experiment, metrics: &[MetricsRow]) -> Vec<SummaryRow> {
    exp.manifest
        .algorithms
        .iter()
        .filter_map(|algo| {
            let runs = exp.runs_of(algo);
            if runs.is_empty() {
                return None;
            }
            let costs: Vec<f64> = runs.iter().map(|r| r.best_cost().cost).collect();
            let mine: Vec<&MetricsRow> = metrics.iter().filter(|m| &m.algorithm == algo).collect();
            let spreads: Vec<f64> = mine.iter().filter_map(|m| m.spread).collect();
            Some(SummaryRow {
                system: exp.system.name.clone(),
                algorithm: algo.clone(),
                runs: runs.len(),
                best_cost: costs.iter().copied().fold(f64::INFINITY, f64::min),
                worst_cost: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_cost: mean(&costs),
                std_cost: std_dev(&costs),
                best_emission: runs
                    .iter()
                    .map(|r| r.best_emission().emission)
                    .fold(f64::INFINITY, f64::min),
                mean_front_size: mean(
                    &runs
                        .iter()
                        .map(|r| r.front.len() as f64)
                        .collect::<Vec<_>>(),
                ),
                mean_time_s: mean(&runs.iter().map(|r| r.wall_time_s).collect::<Vec<_>>()),
                mean_hv: (!mine.is_empty())
                    .then(|| mean(&mine.iter().map(|m| m.hv).collect::<Vec<_>>())),
                mean_spread: (!spreads.is_empty()).then(|| mean(&spreads)),
            })
        })
        .collect()
}

/// Setpoints, objectives, loss and residuals of the highlighted points of
/// every run, recomputed from the stored genes.
pub fn dispatch_csv(exp: &Experiment) -> Result<Vec<u8>> {
    let sys = &exp.system;
    let labels = gene_labels(sys);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["algorithm", "seed", "point"].map(String::from).to_vec();
    header.extend(labels.iter().cloned());
    header.extend(
        [
            "cost",
            "emission",
            "ploss",
            "power_residual",
            "heat_residual",
            "violation",
            "time_s",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    let kinds: &[&str] = match exp.manifest.mode {
        Mode::Chped => &["min_cost"],
        Mode::Chpeed => &["min_cost", "min_emission", "compromise"],
    };
    for algo in &exp.manifest.algorithms {
        for r in exp.runs_of(algo) {
            for &kind in kinds {
                let p = match kind {
                    "min_cost" => r.best_cost(),
                    "min_emission" => r.best_emission(),
                    _ => r.compromise(),
                };
                let e = evaluate(&p.dispatch(sys)?, sys)?;
                let mut row = vec![algo.clone(), r.seed.to_string(), kind.to_string()];
                row.extend(p.genes.iter().map(f64::to_string));
                row.extend(
                    [
                        e.cost,
                        e.emission,
                        e.loss,
                        e.power_residual,
                        e.heat_residual,
                        p.violation,
                        r.wall_time_s,
                    ]
                    .map(|v| v.to_string()),
                );
                w.write_record(&row)?;
            }
        }
    }
    Ok(w.into_inner().context("flushing csv")?)
}

/// Re-evaluates every stored point and checks it against the stored
/// objectives, guarding against stale or edited dumps.
pub fn verify_fronts(exp: &Experiment, ccfg: &ConstraintConfig) -> Result<()> {
    for r in &exp.records {
        for p in &r.front.points {
            let again = penalized_objectives(&p.dispatch(&exp.system)?, &exp.system, ccfg)?;
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(1.0);
            if !close(again.cost, p.cost) || !close(again.emission, p.emission) {
                bail!(
                    "{} seed {}: stored objectives ({}, {}) disagree with re-evaluation ({}, {})",
                    r.algorithm,
                    r.seed,
                    p.cost,
                    p.emission,
                    again.cost,
                    again.emission
                );
            }
        }
    }
    Ok(())
}

/// Metrics of every run under common bounds.
pub fn experiment_metrics(exp: &Experiment, bounds: &BoundsChoice) -> Result<Vec<MetricsRow>> {
    let b = bounds.resolve(exp.records.iter().map(|r| &r.front))?;
    let mut rows = Vec::new();
    for algo in &exp.manifest.algorithms {
        rows.extend(metrics_rows(&exp.runs_of(algo), &b));
    }
    Ok(rows)
}

/// Reference algorithm (listed first) against each of the others.
pub fn experiment_comparisons(
    exp: &Experiment,
    metrics: &[MetricsRow],
    alpha: f64,
) -> Result<Vec<ComparisonRow>> {
    let of = |algo: &str| -> Vec<MetricsRow> {
        metrics
            .iter()
            .filter(|m| m.algorithm == algo)
            .cloned()
            .collect()
    };
    let algos = &exp.manifest.algorithms;
    let mut rows = Vec::new();
    for other in algos.iter().skip(1) {
        rows.extend(compare_rows(&of(&algos[0]), &of(other), alpha)?);
    }
    Ok(rows)
}

/// Writes `eaf_<ALGO>_<level>.csv` for every algorithm with at least two runs.
pub fn write_eaf(exp: &Experiment, levels: &[f64]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for algo in &exp.manifest.algorithms {
        let runs: Vec<Vec<[f64; 2]>> = exp
            .runs_of(algo)
            .iter()
            .map(|r| r.front.objectives())
            .collect();
        if runs.len() < 2 {
            continue;
        }
        for s in eaf_surfaces(&runs, levels)? {
            let rows: Vec<EafRow> = s
                .points
                .iter()
                .map(|p| EafRow {
                    cost: p[0],
                    emission: p[1],
                })
                .collect();
            let path = exp
                .dir
                .join(REPORTS)
                .join(format!("eaf_{algo}_{}.csv", s.level));
            write_csv(&path, &rows)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn write_metrics(exp: &Experiment, rows: &[MetricsRow]) -> Result<PathBuf> {
    let path = exp.dir.join(REPORTS).join("metrics.csv");
    write_csv(&path, rows)?;
    Ok(path)
}

/// Writes every report of an experiment and returns the files written.
pub fn emit_reports(exp: &Experiment) -> Result<Vec<PathBuf>> {
    let reports = exp.dir.join(REPORTS);
    let mut written = Vec::new();

    let dispatch = reports.join("dispatch.csv");
    write_atomic(&dispatch, &dispatch_csv(exp)?)?;
    written.push(dispatch);

    let metrics = match exp.manifest.mode {
        Mode::Chpeed => {
            let rows = experiment_metrics(exp, &BoundsChoice::Union)?;
            written.push(write_metrics(exp, &rows)?);
            let cmp = experiment_comparisons(exp, &rows, exp.manifest.alpha)?;
            if !cmp.is_empty() {
                let path = reports.join("wilcoxon.csv");
                write_csv(&path, &cmp)?;
                written.push(path);
            }
            written.extend(write_eaf(exp, &exp.manifest.eaf_levels)?);
            rows
        }
        Mode::Chped => Vec::new(),
    };

    let summary = reports.join("summary.csv");
    write_csv(&summary, &summary_rows(exp, &metrics))?;
    written.push(summary);
    Ok(written)
}

/// Front directory of one side of a comparison: either a directory of
/// `seed_<n>.csv` dumps or an experiment directory holding one algorithm.
pub fn load_front_set(path: &Path) -> Result<Vec<FrontArchive>> {
    if let Ok(m) = Manifest::load(path) {
        if m.algorithms.len() != 1 {
            bail!(
                "{} holds {} algorithms; point at one of its {FRONTS}/<ALGO> directories",
                path.display(),
                m.algorithms.len()
            );
        }
        return read_front_dir(
            &path.join(FRONTS).join(&m.algorithms[0]),
            &m.system,
            &m.algorithms[0],
        );
    }
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "fronts".into());
    read_front_dir(path, "", &name)
}

/// Compares two front sets by hypervolume and spread under their union bounds.
pub fn compare_front_sets(
    a: &[FrontArchive],
    b: &[FrontArchive],
    alpha: f64,
) -> Result<Vec<ComparisonRow>> {
    let bounds = BoundsChoice::Union.resolve(a.iter().chain(b))?;
    let rows = |set: &[FrontArchive]| -> Vec<MetricsRow> {
        set.iter()
            .map(|f| MetricsRow {
                system: f.system_id.clone(),
                algorithm: f.algorithm.clone(),
                seed: f.seed,
                hv: hv_metric(f, &bounds),
                spread: spread_delta(f, &bounds),
            })
            .collect()
    };
    compare_rows(&rows(a), &rows(b), alpha)
}

pub fn to_csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    Ok(String::from_utf8(csv_bytes(rows)?)?)
}

/// Objective point of a front member, for display.
pub fn describe(p: &FrontPoint) -> String {
    format!("cost {:.2} $, emission {:.4} kg", p.cost, p.emission)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(algo: &str, seed: u64, hv: f64, spread: f64) -> MetricsRow {
        MetricsRow {
            system: "s".into(),
            algorithm: algo.into(),
            seed,
            hv,
            spread: Some(spread),
        }
    }

    #[test]
    fn comparison_counts_wins_and_pairs_by_seed() {
        let a: Vec<MetricsRow> = (1..=6).map(|s| row("A", s, 0.9, 0.2)).collect();
        let mut b: Vec<MetricsRow> = (1..=6).map(|s| row("B", s, 0.8, 0.3)).collect();
        b.reverse();
        let rows = compare_rows(&a, &b, 0.05).unwrap();
        assert_eq!(rows[0].metric, "hv");
        assert_eq!(rows[0].reference_wins, 6);
        assert_eq!(rows[1].reference_wins, 6);
        assert_eq!(rows[0].pairs, 6);
        assert!((rows[0].p_value - 0.03125).abs() < 1e-15);
        assert!(rows[0].reject);
        assert!(compare_rows(&a, &[row("B", 99, 0.1, 0.1)], 0.05).is_err());
    }

    #[test]
    fn sample_statistics() {
        assert_eq!(std_dev(&[5.0]), 0.0);
        assert!((std_dev(&[1.0, 2.0, 3.0, 4.0]) - 1.2909944487358056).abs() < 1e-15);
        assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
    }

    #[test]
    fn comparison_rows_serialize_to_csv() {
        let a = vec![row("A", 1, 0.9, 0.2), row("A", 2, 0.8, 0.1)];
        let b = vec![row("B", 1, 0.7, 0.3), row("B", 2, 0.9, 0.4)];
        let text = to_csv_string(&compare_rows(&a, &b, 0.05).unwrap()).unwrap();
        assert!(text.starts_with("system,reference,other,metric,pairs,reference_wins"));
        assert_eq!(text.lines().count(), 3);
    }
}
