//! Seeded batches of engine runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chpeed_core::moea::run;
use chpeed_core::{FrontArchive, FrontPoint, SystemDefinition};
use rayon::prelude::*;

use crate::config::{check_constraint, parse_system, ExperimentConfig};
use crate::store::{
    front_csv, front_path, gene_labels, read_front_points, write_atomic, Manifest, RunEntry,
    CONFIG_COPY, FRONTS, MANIFEST, REPORTS, SYSTEM_COPY,
};

/// One finished (or reloaded) engine run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub experiment: String,
    pub algorithm: String,
    pub seed: u64,
    pub wall_time_s: f64,
    pub front: FrontArchive,
}

impl RunRecord {
    pub fn best_cost(&self) -> &FrontPoint {
        self.front.min_cost().expect("fronts are never empty")
    }

    pub fn best_emission(&self) -> &FrontPoint {
        self.front.min_emission().expect("fronts are never empty")
    }

    pub fn compromise(&self) -> &FrontPoint {
        self.front.compromise().expect("fronts are never empty")
    }
}

/// A loaded experiment directory.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub system: SystemDefinition,
    pub records: Vec<RunRecord>,
}

impl Experiment {
    pub fn open(dir: &Path) -> Result<Experiment> {
        let manifest = Manifest::load(dir)?;
        let text = fs::read_to_string(dir.join(SYSTEM_COPY))
            .with_context(|| format!("reading {}", dir.join(SYSTEM_COPY).display()))?;
        let system = parse_system(&text)?;
        let records = manifest
            .runs
            .iter()
            .map(|entry| {
                let points = read_front_points(&dir.join(&entry.front_file))?;
                if points.is_empty() {
                    bail!("{} holds an empty front", entry.front_file);
                }
                Ok(RunRecord {
                    experiment: manifest.id.clone(),
                    algorithm: entry.algorithm.clone(),
                    seed: entry.seed,
                    wall_time_s: entry.wall_time_s,
                    front: FrontArchive {
                        system_id: system.name.clone(),
                        algorithm: entry.algorithm.clone(),
                        seed: entry.seed,
                        run_id: format!("{}-{}-{}", system.name, entry.algorithm, entry.seed),
                        evaluations: entry.evaluations,
                        points,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Experiment {
            dir: dir.to_path_buf(),
            manifest,
            system,
            records,
        })
    }

    /// Records of one algorithm, in seed order.
    pub fn runs_of(&self, algorithm: &str) -> Vec<&RunRecord> {
        let mut runs: Vec<&RunRecord> = self
            .records
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .collect();
        runs.sort_by_key(|r| r.seed);
        runs
    }
}

/// Clears the outputs of an earlier run of the same experiment; refuses to
/// touch a non-empty directory that is not an experiment directory.
fn prepare_dir(dir: &Path) -> Result<()> {
    if dir.exists() {
        let ours = dir.join(MANIFEST).exists();
        let empty = fs::read_dir(dir)?.next().is_none();
        if !ours && !empty {
            bail!(
                "{} exists and is not an experiment directory; refusing to overwrite",
                dir.display()
            );
        }
        for sub in [FRONTS, REPORTS] {
            let path = dir.join(sub);
            if path.exists() {
                fs::remove_dir_all(&path)
                    .with_context(|| format!("clearing {}", path.display()))?;
            }
        }
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

/// Runs every algorithm for every repetition and persists the results
/// under `root/<id>`. Runs execute in parallel; each is sequential and
/// seeded, so the fronts do not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path, root: &Path) -> Result<Experiment> {
    cfg.validate()?;
    let source = cfg.system_source(base)?;
    let system = parse_system(&source).with_context(|| format!("loading system {}", cfg.system))?;
    check_constraint(&cfg.constraint, &system)?;

    let dir = root.join(&cfg.id);
    prepare_dir(&dir)?;
    write_atomic(&dir.join(SYSTEM_COPY), source.as_bytes())?;
    let mut resolved = serde_json::to_string_pretty(cfg)?;
    resolved.push('\n');
    write_atomic(&dir.join(CONFIG_COPY), resolved.as_bytes())?;

    let labels = gene_labels(&system);
    let jobs: Vec<(usize, usize)> = (0..cfg.algorithms.len())
        .flat_map(|a| (0..cfg.repetitions).map(move |r| (a, r)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(a, r)| {
            let engine = cfg.engine(a, r);
            let tag = engine.algorithm.tag();
            let start = Instant::now();
            let front = run(&system, &engine, &cfg.constraint)
                .with_context(|| format!("{tag} run with seed {}", engine.rng_seed))?;
            let wall_time_s = start.elapsed().as_secs_f64();
            let path = front_path(&dir, tag, engine.rng_seed);
            write_atomic(&path, &front_csv(&front, &labels)?)?;
            Ok(RunRecord {
                experiment: cfg.id.clone(),
                algorithm: tag.to_string(),
                seed: engine.rng_seed,
                wall_time_s,
                front,
            })
        })
        .collect::<Result<Vec<RunRecord>>>()?;

    let manifest = Manifest {
        id: cfg.id.clone(),
        system: system.name.clone(),
        mode: cfg.mode,
        algorithms: cfg
            .algorithms
            .iter()
            .map(|a| a.algorithm.tag().to_string())
            .collect(),
        eaf_levels: cfg.eaf_levels.clone(),
        alpha: cfg.alpha,
        runs: records
            .iter()
            .map(|r| RunEntry {
                algorithm: r.algorithm.clone(),
                seed: r.seed,
                wall_time_s: r.wall_time_s,
                evaluations: r.front.evaluations,
                front_size: r.front.len(),
                front_file: format!("{FRONTS}/{}/seed_{}.csv", r.algorithm, r.seed),
            })
            .collect(),
    };
    manifest.save(&dir)?;
    Ok(Experiment {
        dir,
        manifest,
        system,
        records,
    })
}
