//! Thin command-line front end over the library: estimate a dataset file,
//! run a Monte Carlo benchmark, run the invariant suites, or generate a
//! contaminated dataset. All logic lives in the library; this file only
//! parses arguments, reads and writes files, and prints.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use mom_fenchel::bench::run_experiment;
use mom_fenchel::config::{
    self, ContaminationConfig, DatagenFile, DatasetMetadata, EstimateFile, ExperimentFile,
    InlierConfig,
};
use mom_fenchel::datagen::generate_dataset;
use mom_fenchel::verify::{run_suites, SUITE_NAMES};
use mom_fenchel::{io, Result};

/// Name of the environment variable choosing the worker thread count for
/// parallel trial loops (default: all cores).
const THREADS_ENV: &str = "MOM_FENCHEL_THREADS";

#[derive(Parser)]
#[command(
    name = "mom-fenchel",
    version,
    about = "Robust multivariate location estimation via median-of-means conjugates",
    after_help = "Set MOM_FENCHEL_THREADS to bound the worker threads used by trial loops."
)]
struct Cli {
    /// Override the seed from any config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the location of a dataset file and print a report.
    Estimate {
        /// Dataset file: delimited text, one sample per row.
        #[arg(long)]
        data: PathBuf,
        /// Run description (TOML): estimator, set, block count, seed.
        #[arg(long)]
        config: PathBuf,
        /// Also write the report as TOML to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo rate experiment and write report files.
    Bench {
        /// Experiment description (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output prefix: writes <prefix>.cells.tsv, <prefix>.errors.tsv,
        /// and <prefix>.summary.toml.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the library's invariant suites; nonzero exit on any failure.
    Verify {
        /// Substring filter on suite names (default: run all).
        #[arg(long, default_value = "")]
        suite: String,
        /// List the available suite names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Generate a contaminated dataset file plus its metadata sidecar.
    Datagen {
        /// Generator description (TOML): inlier model, contamination, n.
        #[arg(long)]
        config: PathBuf,
        /// Dataset output path; <out>.meta.toml is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
}

/// TOML report emitted by `estimate --out`.
#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct EstimateReport {
    estimator: String,
    set: String,
    n: usize,
    dim: usize,
    k: usize,
    seed: u64,
    converged: bool,
    mu_hat: Vec<f64>,
    objective_value: Option<f64>,
    initial_objective_value: Option<f64>,
    iterations: Option<usize>,
}

fn main() -> ExitCode {
    reset_sigpipe();
    configure_threads();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Restore the default SIGPIPE disposition so piping into `head` or a
/// pager that exits early terminates the process quietly, like other
/// command-line tools, instead of panicking on a closed stdout.
#[cfg(unix)]
fn reset_sigpipe() {
    // SAFETY: installs SIG_DFL (no Rust code runs on delivery); called
    // before any threads or I/O exist.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // Ignore the error from a pool that is already initialized.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => eprintln!("warning: ignoring {THREADS_ENV}={raw:?} (want a positive integer)"),
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Estimate { data, config, out } => {
            cmd_estimate(data, config, cli.seed, out.as_deref())
        }
        Command::Bench { config, out } => cmd_bench(config, cli.seed, out),
        Command::Verify { suite, list } => cmd_verify(suite, *list, cli.seed),
        Command::Datagen { config, out } => cmd_datagen(config, cli.seed, out),
    }
}

fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    config::from_toml_str(&fs::read_to_string(path)?)
}

fn cmd_estimate(
    data_path: &Path,
    config_path: &Path,
    seed_override: Option<u64>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let file: EstimateFile = read_config(config_path)?;
    let seed = seed_override.unwrap_or(file.seed);
    let data = io::read_dataset(data_path)?;
    let set = file.set.build()?;
    let estimator = file.estimator.build(seed);
    let run = estimator.run(&data, file.k, &set, seed)?;

    let report = EstimateReport {
        estimator: estimator.describe(),
        set: set.describe(),
        n: data.nrows(),
        dim: data.ncols(),
        k: file.k,
        seed,
        converged: run.converged,
        mu_hat: run.mu_hat.iter().copied().collect(),
        objective_value: run.solver.as_ref().map(|s| s.value),
        initial_objective_value: run.solver.as_ref().map(|s| s.initial_value),
        iterations: run.solver.as_ref().map(|s| s.iterations),
    };

    println!(
        "estimator {} on {} samples in dimension {} with K = {} blocks (seed {})",
        report.estimator, report.n, report.dim, report.k, report.seed
    );
    let coords: Vec<String> = report.mu_hat.iter().map(|x| format!("{x:?}")).collect();
    println!("mu_hat\t{}", coords.join("\t"));
    if let Some(solver) = &run.solver {
        println!(
            "objective {:?} (from {:?}) after {} iterations, converged = {}",
            solver.value, solver.initial_value, solver.iterations, solver.converged
        );
    }
    if let Some(meta) = io::read_metadata(data_path)? {
        let truth = meta.inlier.build()?.location().clone();
        if truth.len() == run.mu_hat.len() {
            let err = set.norm_s(&(&run.mu_hat - &truth))?;
            println!("S-norm error against the generator's location: {err:?}");
        }
    }
    if let Some(path) = out {
        fs::write(path, config::to_toml_string(&report)?)?;
        println!("report written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(config_path: &Path, seed_override: Option<u64>, out: &Path) -> Result<ExitCode> {
    let file: ExperimentFile = read_config(config_path)?;
    let cfg = file.build(seed_override)?;
    println!(
        "running {} trials per cell over {} cells: estimator {}, set {}, seed {}",
        cfg.trials,
        cfg.cells.len(),
        cfg.estimator.describe(),
        cfg.set.describe(),
        cfg.seed
    );
    let report = run_experiment(&cfg)?;
    for cell in &report.cells {
        println!(
            "n = {:6}  k = {:4}  median error {:.6e}  upper quantile {:.6e}  baseline median {:.6e}  ({} non-converged, {:.2}s)",
            cell.n,
            cell.k,
            cell.median_error,
            cell.upper_quantile_error,
            cell.baseline_median_error,
            cell.non_converged,
            cell.seconds,
        );
    }
    match report.slope {
        Some(s) => println!("fitted log-log error slope: {s:.4}"),
        None => println!("fitted log-log error slope: not available (need 3+ distinct n)"),
    }
    let paths = io::write_rate_report(out, &report)?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, list: bool, seed_override: Option<u64>) -> Result<ExitCode> {
    if list {
        for name in SUITE_NAMES {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let seed = seed_override.unwrap_or(0);
    let outcomes = run_suites(suite, seed)?;
    if outcomes.is_empty() {
        eprintln!("no suite name contains {suite:?}; try --list");
        return Ok(ExitCode::FAILURE);
    }
    let mut all_passed = true;
    for o in &outcomes {
        if o.passed {
            println!("PASS  {:-22}  {} cases", o.name, o.cases);
        } else {
            all_passed = false;
            println!(
                "FAIL  {:-22}  {} of {} cases failed\n{}",
                o.name, o.failures, o.cases, o.detail
            );
        }
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_datagen(config_path: &Path, seed_override: Option<u64>, out: &Path) -> Result<ExitCode> {
    let file: DatagenFile = read_config(config_path)?;
    let seed = seed_override.unwrap_or(file.seed);
    let model = file.inlier.build()?;
    let strategy = file.contamination.build();
    let dataset = generate_dataset(&model, &strategy, file.n, seed)?;
    io::write_dataset(out, &dataset.data)?;
    let meta = DatasetMetadata {
        n: dataset.data.nrows(),
        dim: dataset.data.ncols(),
        seed,
        outlier_indices: dataset.outlier_indices.clone(),
        inlier: InlierConfig::from(&model),
        contamination: ContaminationConfig::from(&strategy),
    };
    io::write_metadata(out, &meta)?;
    println!(
        "wrote {} samples in dimension {} to {} ({} contaminated rows; sidecar {})",
        meta.n,
        meta.dim,
        out.display(),
        meta.outlier_indices.len(),
        io::metadata_path(out).display()
    );
    Ok(ExitCode::SUCCESS)
}
