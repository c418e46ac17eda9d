//! Reading and writing datasets and experiment reports.
//!
//! Datasets are plain delimited text: one sample per line, coordinates
//! separated by tabs (any whitespace accepted on read), `#` starting a
//! comment line. Values are written with Rust's shortest round-trip
//! float formatting, so a write/read cycle reproduces every bit.
//!
//! Generated datasets carry a `<path>.meta.toml` sidecar with the
//! generator description, seed, and outlier indices.
//!
//! Rate reports are written as delimited tables plus a TOML summary. The
//! tables contain only deterministic quantities; wall-clock timings go to
//! the summary, which is the one non-reproducible artifact.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bench::RateReport;
use crate::config::{self, DatasetMetadata};
use crate::error::{Error, Result};

/// Writes a dataset matrix (rows = samples) as tab-separated text.
pub fn write_dataset(path: &Path, data: &DMatrix<f64>) -> Result<()> {
    let mut out = String::new();
    writeln!(
        out,
        "# {} samples x {} coordinates",
        data.nrows(),
        data.ncols()
    )
    .unwrap();
    for i in 0..data.nrows() {
        let mut line = String::new();
        for j in 0..data.ncols() {
            if j > 0 {
                line.push('\t');
            }
            write!(line, "{:?}", data[(i, j)]).unwrap();
        }
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a dataset matrix from delimited text. Empty lines and lines
/// starting with `#` are skipped; every data line must have the same
/// number of whitespace-separated finite values.
pub fn read_dataset(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in trimmed.split_whitespace() {
            let value: f64 = tok.parse().map_err(|_| Error::DatasetFormat {
                line: line_no,
                reason: format!("cannot parse {tok:?} as a number"),
            })?;
            row.push(value);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::DatasetFormat {
                    line: line_no,
                    reason: format!("expected {w} columns, found {}", row.len()),
                });
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    let d = width.ok_or(Error::EmptyData {
        context: "dataset file",
    })?;
    if d == 0 {
        return Err(Error::EmptyData {
            context: "dataset file",
        });
    }
    let n = rows.len();
    Ok(DMatrix::from_fn(n, d, |i, j| rows[i][j]))
}

/// The sidecar path for a dataset file: `<path>.meta.toml`.
pub fn metadata_path(dataset_path: &Path) -> PathBuf {
    let mut name = dataset_path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.toml");
    dataset_path.with_file_name(name)
}

/// Writes the metadata sidecar next to a dataset file.
pub fn write_metadata(dataset_path: &Path, meta: &DatasetMetadata) -> Result<()> {
    let text = config::to_toml_string(meta)?;
    fs::write(metadata_path(dataset_path), text)?;
    Ok(())
}

/// Reads the metadata sidecar for a dataset file, if present.
pub fn read_metadata(dataset_path: &Path) -> Result<Option<DatasetMetadata>> {
    let path = metadata_path(dataset_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path)?;
    Ok(Some(config::from_toml_str(&text)?))
}

/// Deterministic per-cell table of a rate report, as tab-separated text
/// with a header row. Optional theory columns print `NA` when the model
/// has no finite second moment.
pub fn cells_table(report: &RateReport) -> String {
    let mut out = String::new();
    out.push_str(
        "n\tk\tmedian_error\tupper_quantile_error\tbaseline_median_error\t\
         baseline_upper_quantile_error\tnon_converged\trademacher\trademacher_se\t\
         weak_variance\tr_star\tmean_width\tmean_width_se\tsubgaussian\tr_diamond\n",
    );
    for cell in &report.cells {
        let opt = |v: Option<f64>| match v {
            Some(x) => format!("{x:?}"),
            None => "NA".to_string(),
        };
        let (mw, mw_se) = match &cell.theory.mean_width {
            Some(est) => (format!("{:?}", est.mean), format!("{:?}", est.std_error)),
            None => ("NA".to_string(), "NA".to_string()),
        };
        writeln!(
            out,
            "{}\t{}\t{:?}\t{:?}\t{:?}\t{:?}\t{}\t{:?}\t{:?}\t{}\t{}\t{}\t{}\t{}\t{:?}",
            cell.n,
            cell.k,
            cell.median_error,
            cell.upper_quantile_error,
            cell.baseline_median_error,
            cell.baseline_upper_quantile_error,
            cell.non_converged,
            cell.theory.rademacher.mean,
            cell.theory.rademacher.std_error,
            opt(cell.theory.weak_variance),
            opt(cell.theory.r_star),
            mw,
            mw_se,
            opt(cell.theory.subgaussian),
            cell.theory.r_diamond,
        )
        .unwrap();
    }
    out
}

/// Deterministic per-trial error table: one row per (cell, sorted-rank)
/// pair, as tab-separated text with a header row.
pub fn errors_table(report: &RateReport) -> String {
    let mut out = String::from("n\tk\trank\terror\n");
    for cell in &report.cells {
        for (rank, err) in cell.errors.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}\t{err:?}", cell.n, cell.k, rank + 1).unwrap();
        }
    }
    out
}

/// TOML summary of a rate report. Contains the run description, the
/// fitted error-vs-n slope, and the total wall-clock time (the only
/// field that varies between identical runs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ReportSummary {
    pub estimator: String,
    pub set: String,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub cell_count: usize,
    pub slope: Option<f64>,
    pub total_seconds: f64,
}

impl ReportSummary {
    /// Extracts the summary from a report.
    pub fn from_report(report: &RateReport) -> Self {
        Self {
            estimator: report.estimator.clone(),
            set: report.set.clone(),
            delta: report.delta,
            trials: report.trials,
            seed: report.seed,
            cell_count: report.cells.len(),
            slope: report.slope,
            total_seconds: report.cells.iter().map(|c| c.seconds).sum(),
        }
    }
}

/// Writes `<prefix>.cells.tsv`, `<prefix>.errors.tsv`, and
/// `<prefix>.summary.toml` for a rate report. Returns the three paths.
pub fn write_rate_report(prefix: &Path, report: &RateReport) -> Result<[PathBuf; 3]> {
    let with_ext = |ext: &str| -> PathBuf {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(ext);
        prefix.with_file_name(name)
    };
    let cells_path = with_ext(".cells.tsv");
    let errors_path = with_ext(".errors.tsv");
    let summary_path = with_ext(".summary.toml");
    fs::write(&cells_path, cells_table(report))?;
    fs::write(&errors_path, errors_table(report))?;
    fs::write(
        &summary_path,
        config::to_toml_string(&ReportSummary::from_report(report))?,
    )?;
    Ok([cells_path, errors_path, summary_path])
}
