//! On-disk layout of an experiment directory.
//!
//! ```text
//! <root>/<id>/
//!     experiment.json         resolved experiment config
//!     system.json             copy of the system file
//!     manifest.json           one entry per run
//!     fronts/<ALGO>/seed_<s>.csv
//!     reports/*.csv
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chpeed_core::{FrontArchive, FrontPoint, SystemDefinition};
use serde::{Deserialize, Serialize};

use crate::config::Mode;

pub const MANIFEST: &str = "manifest.json";
pub const SYSTEM_COPY: &str = "system.json";
pub const CONFIG_COPY: &str = "experiment.json";
pub const FRONTS: &str = "fronts";
pub const REPORTS: &str = "reports";

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let mut file = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    file.write_all(bytes)?;
    file.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Column labels of the decision variables: `p1.., o1.., h1.., t1..`.
pub fn gene_labels(sys: &SystemDefinition) -> Vec<String> {
    let mut labels = Vec::new();
    for (prefix, count) in [
        ("p", sys.power_units.len()),
        ("o", sys.cogen_units.len()),
        ("h", sys.cogen_units.len()),
        ("t", sys.heat_units.len()),
    ] {
        labels.extend((1..=count).map(|i| format!("{prefix}{i}")));
    }
    labels
}

pub fn front_path(dir: &Path, algorithm: &str, seed: u64) -> PathBuf {
    dir.join(FRONTS)
        .join(algorithm)
        .join(format!("seed_{seed}.csv"))
}

pub fn front_csv(front: &FrontArchive, labels: &[String]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["cost".to_string(), "emission".into(), "violation".into()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for p in &front.points {
        if p.genes.len() != labels.len() {
            bail!(
                "front point has {} genes, expected {}",
                p.genes.len(),
                labels.len()
            );
        }
        let mut row = vec![
            p.cost.to_string(),
            p.emission.to_string(),
            p.violation.to_string(),
        ];
        row.extend(p.genes.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    Ok(w.into_inner().context("flushing csv")?)
}

/// Reads the points of a front dump.
pub fn read_front_points(path: &Path) -> Result<Vec<FrontPoint>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header = r.headers()?.clone();
    if header.len() < 3
        || &header[0] != "cost"
        || &header[1] != "emission"
        || &header[2] != "violation"
    {
        bail!("{} is not a front dump", path.display());
    }
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let values: Vec<f64> = rec
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{} row {}", path.display(), line + 1))?;
        points.push(FrontPoint {
            cost: values[0],
            emission: values[1],
            violation: values[2],
            genes: values[3..].to_vec(),
        });
    }
    Ok(points)
}

/// Fronts stored as `seed_<s>.csv` in `dir`, ordered by seed.
pub fn read_front_dir(dir: &Path, system_id: &str, algorithm: &str) -> Result<Vec<FrontArchive>> {
    let mut seeds = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let name = entry?.file_name().to_string_lossy().into_owned();
        if let Some(seed) = name
            .strip_prefix("seed_")
            .and_then(|s| s.strip_suffix(".csv"))
            .and_then(|s| s.parse::<u64>().ok())
        {
            seeds.push(seed);
        }
    }
    if seeds.is_empty() {
        bail!("no seed_<n>.csv front dumps in {}", dir.display());
    }
    seeds.sort_unstable();
    seeds
        .into_iter()
        .map(|seed| {
            Ok(FrontArchive {
                system_id: system_id.to_string(),
                algorithm: algorithm.to_string(),
                seed,
                run_id: format!("{system_id}-{algorithm}-{seed}"),
                evaluations: 0,
                points: read_front_points(&dir.join(format!("seed_{seed}.csv")))?,
            })
        })
        .collect()
}

/// Summary of one persisted run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub algorithm: String,
    pub seed: u64,
    pub wall_time_s: f64,
    pub evaluations: usize,
    pub front_size: usize,
    /// Front dump, relative to the experiment directory.
    pub front_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub system: String,
    pub mode: Mode,
    /// Algorithm tags in config order; the first is the reference in
    /// comparisons.
    pub algorithms: Vec<String>,
    pub eaf_levels: Vec<f64>,
    pub alpha: f64,
    pub runs: Vec<RunEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Manifest> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path)
            .with_context(|| format!("{} is not an experiment directory", dir.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(&dir.join(MANIFEST), text.as_bytes())
    }
}
