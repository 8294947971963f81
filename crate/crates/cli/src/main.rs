use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use chpeed_cli::config::ExperimentConfig;
use chpeed_cli::experiment::{run_experiment, Experiment};
use chpeed_cli::report::{
    compare_front_sets, describe, emit_reports, experiment_metrics, load_front_set, to_csv_string,
    verify_fronts, write_eaf, write_metrics, BoundsChoice,
};
use chpeed_cli::Mode;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "chpeed",
    version,
    about = "Combined heat and power dispatch experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Test {
    Wilcoxon,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write fronts and reports.
    Run { experiment: PathBuf },
    /// Hypervolume and spread of every run.
    Metrics {
        run_dir: PathBuf,
        /// `union` or a JSON file with `min` and `max` objective vectors.
        #[arg(long, default_value = "union")]
        bounds: String,
    },
    /// Empirical attainment surfaces per algorithm.
    Eaf {
        run_dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "25,50,75")]
        levels: Vec<f64>,
    },
    /// Paired test between two sets of fronts.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "wilcoxon")]
        test: Test,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Re-emit every report of an experiment directory.
    Report { run_dir: PathBuf },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { experiment } => {
            let (cfg, base) = ExperimentConfig::load(&experiment)?;
            let exp = run_experiment(&cfg, &base, &cfg.output_root())?;
            for r in &exp.records {
                println!(
                    "{:<6} seed {:<4} {:>4} points  min {}  ({:.2} s)",
                    r.algorithm,
                    r.seed,
                    r.front.len(),
                    describe(r.best_cost()),
                    r.wall_time_s
                );
            }
            verify_fronts(&exp, &cfg.constraint)?;
            for path in emit_reports(&exp)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Metrics { run_dir, bounds } => {
            let exp = Experiment::open(&run_dir)?;
            if exp.manifest.mode == Mode::Chped {
                anyhow::bail!("metrics need the cost/emission mode");
            }
            let rows = experiment_metrics(&exp, &BoundsChoice::parse(&bounds)?)?;
            write_metrics(&exp, &rows)?;
            print!("{}", to_csv_string(&rows)?);
        }
        Command::Eaf { run_dir, levels } => {
            let exp = Experiment::open(&run_dir)?;
            for path in write_eaf(&exp, &levels)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Compare { a, b, test, alpha } => {
            let Test::Wilcoxon = test;
            if !(alpha > 0.0 && alpha < 1.0) {
                anyhow::bail!("alpha must lie in (0, 1)");
            }
            let left = load_front_set(&a).with_context(|| format!("loading {}", a.display()))?;
            let right = load_front_set(&b).with_context(|| format!("loading {}", b.display()))?;
            print!(
                "{}",
                to_csv_string(&compare_front_sets(&left, &right, alpha)?)?
            );
        }
        Command::Report { run_dir } => {
            let exp = Experiment::open(&run_dir)?;
            for path in emit_reports(&exp)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
