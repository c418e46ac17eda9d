//! Human-readable configuration files (TOML) mirroring the domain types,
//! plus the dataset metadata sidecar format.
//!
//! The mirrors are plain serde structs; converting to the richer library
//! types runs the constructors' full validation, so a loaded config can
//! fail late with a precise error rather than silently misbehaving.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bench::{EstimatorChoice, ExperimentConfig, RateConstants};
use crate::datagen::{ContaminationStrategy, InlierModel, OutlierDirection, RadialLaw};
use crate::error::{Error, Result};
use crate::estimators::{PartitionMode, SolverConfig};
use crate::fenchel::InnerSolverConfig;
use crate::mom::MomFunction;
use crate::set::{CovarianceModel, SymmetricSet};

/// Which MOM function a config refers to: `g` is the block median, `f` the
/// inter-quartile average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomChoice {
    G,
    F,
}

impl From<MomChoice> for MomFunction {
    fn from(c: MomChoice) -> Self {
        match c {
            MomChoice::G => MomFunction::Median,
            MomChoice::F => MomFunction::InterquartileAverage,
        }
    }
}

/// Symmetric-set description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetConfig {
    /// Canonical cross: the signed standard basis vectors.
    Cross { dim: usize },
    /// Euclidean ball of the given radius.
    Ball { dim: usize, radius: f64 },
    /// Explicit point list (negations are added automatically).
    Points { points: Vec<Vec<f64>> },
}

impl SetConfig {
    /// Builds the validated set.
    pub fn build(&self) -> Result<SymmetricSet> {
        match self {
            Self::Cross { dim } => SymmetricSet::canonical_cross(*dim),
            Self::Ball { dim, radius } => SymmetricSet::euclidean_ball(*dim, *radius),
            Self::Points { points } => SymmetricSet::finite_points(
                points
                    .iter()
                    .map(|p| DVector::from_vec(p.clone()))
                    .collect(),
            ),
        }
    }
}

/// Covariance description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CovarianceConfig {
    Identity { dim: usize },
    Diagonal { entries: Vec<f64> },
    Dense { rows: Vec<Vec<f64>> },
}

impl CovarianceConfig {
    /// Builds the validated covariance model.
    pub fn build(&self) -> Result<CovarianceModel> {
        match self {
            Self::Identity { dim } => CovarianceModel::identity(*dim),
            Self::Diagonal { entries } => {
                CovarianceModel::diagonal(DVector::from_vec(entries.clone()))
            }
            Self::Dense { rows } => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Config(format!(
                        "dense covariance must be square, got {n} rows of lengths {:?}",
                        rows.iter().map(Vec::len).collect::<Vec<_>>()
                    )));
                }
                CovarianceModel::dense(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
            }
        }
    }
}

/// Radial law for spherically symmetric models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialConfig {
    Chi,
    HalfCauchy { scale: f64 },
}

impl From<RadialConfig> for RadialLaw {
    fn from(c: RadialConfig) -> Self {
        match c {
            RadialConfig::Chi => RadialLaw::Chi,
            RadialConfig::HalfCauchy { scale } => RadialLaw::HalfCauchy { scale },
        }
    }
}

impl From<&RadialLaw> for RadialConfig {
    fn from(law: &RadialLaw) -> Self {
        match law {
            RadialLaw::Chi => RadialConfig::Chi,
            RadialLaw::HalfCauchy { scale } => RadialConfig::HalfCauchy { scale: *scale },
        }
    }
}

/// Inlier model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InlierConfig {
    Gaussian {
        location: Vec<f64>,
        covariance: CovarianceConfig,
    },
    CoordCauchy {
        location: Vec<f64>,
        scales: Vec<f64>,
    },
    SphericalRadial {
        location: Vec<f64>,
        radial: RadialConfig,
    },
    StudentT {
        location: Vec<f64>,
        covariance: CovarianceConfig,
        dof: f64,
    },
}

impl InlierConfig {
    /// Builds the validated inlier model.
    pub fn build(&self) -> Result<InlierModel> {
        Ok(match self {
            Self::Gaussian {
                location,
                covariance,
            } => InlierModel::Gaussian {
                location: DVector::from_vec(location.clone()),
                cov: covariance.build()?,
            },
            Self::CoordCauchy { location, scales } => InlierModel::CoordCauchy {
                location: DVector::from_vec(location.clone()),
                scales: DVector::from_vec(scales.clone()),
            },
            Self::SphericalRadial { location, radial } => InlierModel::SphericalRadial {
                location: DVector::from_vec(location.clone()),
                radial: radial.clone().into(),
            },
            Self::StudentT {
                location,
                covariance,
                dof,
            } => InlierModel::StudentT {
                location: DVector::from_vec(location.clone()),
                cov: covariance.build()?,
                dof: *dof,
            },
        })
    }
}

impl From<&InlierModel> for InlierConfig {
    fn from(model: &InlierModel) -> Self {
        let vec_of = |v: &DVector<f64>| v.iter().copied().collect::<Vec<_>>();
        match model {
            InlierModel::Gaussian { location, cov } => Self::Gaussian {
                location: vec_of(location),
                covariance: cov_to_config(cov),
            },
            InlierModel::CoordCauchy { location, scales } => Self::CoordCauchy {
                location: vec_of(location),
                scales: vec_of(scales),
            },
            InlierModel::SphericalRadial { location, radial } => Self::SphericalRadial {
                location: vec_of(location),
                radial: radial.into(),
            },
            InlierModel::StudentT { location, cov, dof } => Self::StudentT {
                location: vec_of(location),
                covariance: cov_to_config(cov),
                dof: *dof,
            },
        }
    }
}

fn cov_to_config(cov: &CovarianceModel) -> CovarianceConfig {
    // Round-trips through the dense form; identity/diagonal structure is a
    // performance detail, not semantics.
    let m = cov.to_matrix();
    CovarianceConfig::Dense {
        rows: (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect())
            .collect(),
    }
}

/// Contamination description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ContaminationConfig {
    #[default]
    None,
    FarPoint {
        count: usize,
        magnitude: f64,
        /// Fixed outlier direction; omit for an independent random unit
        /// direction per corrupted row.
        direction: Option<Vec<f64>>,
    },
    LargestNorm {
        count: usize,
        replacement: Vec<f64>,
    },
    MeanShiftCluster {
        count: usize,
        shift: Vec<f64>,
    },
}

impl ContaminationConfig {
    /// Builds the contamination strategy.
    pub fn build(&self) -> ContaminationStrategy {
        match self {
            Self::None => ContaminationStrategy::None,
            Self::FarPoint {
                count,
                magnitude,
                direction,
            } => ContaminationStrategy::FarPoint {
                count: *count,
                magnitude: *magnitude,
                direction: match direction {
                    Some(v) => OutlierDirection::Fixed(DVector::from_vec(v.clone())),
                    None => OutlierDirection::RandomUnit,
                },
            },
            Self::LargestNorm { count, replacement } => ContaminationStrategy::LargestNorm {
                count: *count,
                replacement: DVector::from_vec(replacement.clone()),
            },
            Self::MeanShiftCluster { count, shift } => ContaminationStrategy::MeanShiftCluster {
                count: *count,
                shift: DVector::from_vec(shift.clone()),
            },
        }
    }
}

impl From<&ContaminationStrategy> for ContaminationConfig {
    fn from(strategy: &ContaminationStrategy) -> Self {
        let vec_of = |v: &DVector<f64>| v.iter().copied().collect::<Vec<_>>();
        match strategy {
            ContaminationStrategy::None => Self::None,
            ContaminationStrategy::FarPoint {
                count,
                magnitude,
                direction,
            } => Self::FarPoint {
                count: *count,
                magnitude: *magnitude,
                direction: match direction {
                    OutlierDirection::Fixed(v) => Some(vec_of(v)),
                    OutlierDirection::RandomUnit => None,
                },
            },
            ContaminationStrategy::LargestNorm { count, replacement } => Self::LargestNorm {
                count: *count,
                replacement: vec_of(replacement),
            },
            ContaminationStrategy::MeanShiftCluster { count, shift } => Self::MeanShiftCluster {
                count: *count,
                shift: vec_of(shift),
            },
        }
    }
}

/// Overrides for the iterative solvers; unset fields keep library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct SolverSettings {
    pub max_outer_iters: Option<usize>,
    pub step_init: Option<f64>,
    pub ascent_step_init: Option<f64>,
    pub stop_tol: Option<f64>,
    /// Redraw the block partition every outer iteration.
    pub rerandomize: Option<bool>,
    pub inner_restarts: Option<usize>,
    pub inner_max_iters: Option<usize>,
    pub inner_step_init: Option<f64>,
    pub inner_tolerance: Option<f64>,
}

impl SolverSettings {
    /// Applies the overrides on top of the default solver configuration.
    pub fn build(&self, seed: u64) -> SolverConfig {
        let defaults = SolverConfig::default();
        let inner_defaults = InnerSolverConfig::default();
        SolverConfig {
            max_outer_iters: self.max_outer_iters.unwrap_or(defaults.max_outer_iters),
            step_init: self.step_init.or(defaults.step_init),
            ascent_step_init: self.ascent_step_init.unwrap_or(defaults.ascent_step_init),
            stop_tol: self.stop_tol.or(defaults.stop_tol),
            partition_mode: if self.rerandomize.unwrap_or(false) {
                PartitionMode::Rerandomized
            } else {
                PartitionMode::Fixed
            },
            inner: InnerSolverConfig {
                restarts: self.inner_restarts.unwrap_or(inner_defaults.restarts),
                max_iters: self.inner_max_iters.unwrap_or(inner_defaults.max_iters),
                step_init: self.inner_step_init.unwrap_or(inner_defaults.step_init),
                tolerance: self.inner_tolerance.unwrap_or(inner_defaults.tolerance),
                seed,
            },
            seed,
        }
    }
}

/// Estimator description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EstimatorConfig {
    EmpiricalMean,
    CoordinatewiseMom,
    FenchelMin {
        which: MomChoice,
        #[serde(default)]
        solver: SolverSettings,
    },
    Alternating {
        which: MomChoice,
        #[serde(default)]
        solver: SolverSettings,
    },
}

impl EstimatorConfig {
    /// Builds the estimator choice, wiring `seed` into the solver.
    pub fn build(&self, seed: u64) -> EstimatorChoice {
        match self {
            Self::EmpiricalMean => EstimatorChoice::EmpiricalMean,
            Self::CoordinatewiseMom => EstimatorChoice::CoordinatewiseMom,
            Self::FenchelMin { which, solver } => EstimatorChoice::FenchelMin {
                which: (*which).into(),
                solver: solver.build(seed),
            },
            Self::Alternating { which, solver } => EstimatorChoice::Alternating {
                which: (*which).into(),
                solver: solver.build(seed),
            },
        }
    }
}

fn default_trials() -> usize {
    50
}
fn default_delta() -> f64 {
    0.05
}
fn default_theory_mc_samples() -> usize {
    200
}
fn default_c0() -> f64 {
    RateConstants::default().c0
}
fn default_c1() -> f64 {
    RateConstants::default().c1
}

/// On-disk description of a full Monte Carlo experiment
/// (the `bench` subcommand's input).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentFile {
    pub estimator: EstimatorConfig,
    pub inlier: InlierConfig,
    #[serde(default)]
    pub contamination: ContaminationConfig,
    pub set: SetConfig,
    /// `(n, k)` pairs.
    pub cells: Vec<(usize, usize)>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_theory_mc_samples")]
    pub theory_mc_samples: usize,
    #[serde(default = "default_c0")]
    pub rate_c0: f64,
    #[serde(default = "default_c1")]
    pub rate_c1: f64,
}

impl ExperimentFile {
    /// Builds the validated experiment configuration. `seed_override`
    /// replaces the file's seed when given (the CLI `--seed` flag).
    pub fn build(&self, seed_override: Option<u64>) -> Result<ExperimentConfig> {
        let seed = seed_override.unwrap_or(self.seed);
        Ok(ExperimentConfig {
            estimator: self.estimator.build(seed),
            inlier: self.inlier.build()?,
            contamination: self.contamination.build(),
            set: self.set.build()?,
            cells: self.cells.clone(),
            trials: self.trials,
            delta: self.delta,
            seed,
            theory_mc_samples: self.theory_mc_samples,
            rate_constants: RateConstants {
                c0: self.rate_c0,
                c1: self.rate_c1,
            },
        })
    }
}

/// On-disk description of a dataset generation run
/// (the `datagen` subcommand's input).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DatagenFile {
    pub inlier: InlierConfig,
    #[serde(default)]
    pub contamination: ContaminationConfig,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

/// On-disk description of a single estimation run
/// (the `estimate` subcommand's input, next to a dataset file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EstimateFile {
    pub estimator: EstimatorConfig,
    pub set: SetConfig,
    /// Block count.
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Sidecar metadata written next to generated dataset files: enough to
/// regenerate the dataset and to score estimators against the truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DatasetMetadata {
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub outlier_indices: Vec<usize>,
    pub inlier: InlierConfig,
    pub contamination: ContaminationConfig,
}

/// Parses a TOML document into any of the config types.
pub fn from_toml_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

/// Serializes a config type to TOML.
pub fn to_toml_string<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_file_round_trips_through_toml() {
        let file = ExperimentFile {
            estimator: EstimatorConfig::FenchelMin {
                which: MomChoice::G,
                solver: SolverSettings {
                    max_outer_iters: Some(100),
                    ..SolverSettings::default()
                },
            },
            inlier: InlierConfig::Gaussian {
                location: vec![0.0, 0.0],
                covariance: CovarianceConfig::Identity { dim: 2 },
            },
            contamination: ContaminationConfig::FarPoint {
                count: 3,
                magnitude: 1e6,
                direction: None,
            },
            set: SetConfig::Ball {
                dim: 2,
                radius: 1.0,
            },
            cells: vec![(100, 5), (400, 5)],
            trials: 20,
            delta: 0.05,
            seed: 7,
            theory_mc_samples: 100,
            rate_c0: 1.0,
            rate_c1: default_c1(),
        };
        let text = to_toml_string(&file).unwrap();
        let back: ExperimentFile = from_toml_str(&text).unwrap();
        assert_eq!(file, back);
        let cfg = back.build(None).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.cells, vec![(100, 5), (400, 5)]);
        let cfg2 = back.build(Some(99)).unwrap();
        assert_eq!(cfg2.seed, 99);
    }

    #[test]
    fn minimal_experiment_document_uses_defaults() {
        let text = r#"
            cells = [[60, 5]]

            [estimator]
            kind = "coordinatewise-mom"

            [inlier]
            kind = "coord-cauchy"
            location = [0.0]
            scales = [1.0]

            [set]
            kind = "cross"
            dim = 1
        "#;
        let file: ExperimentFile = from_toml_str(text).unwrap();
        assert_eq!(file.trials, 50);
        assert_eq!(file.delta, 0.05);
        assert_eq!(file.seed, 0);
        assert_eq!(file.contamination, ContaminationConfig::None);
        assert!(file.build(None).is_ok());
    }

    #[test]
    fn set_configs_build_and_reject() {
        assert!(SetConfig::Cross { dim: 3 }.build().is_ok());
        assert!(SetConfig::Ball {
            dim: 2,
            radius: -1.0
        }
        .build()
        .is_err());
        assert!(SetConfig::Points { points: vec![] }.build().is_err());
        let ragged = CovarianceConfig::Dense {
            rows: vec![vec![1.0, 0.0], vec![0.0]],
        };
        assert!(ragged.build().is_err());
    }

    #[test]
    fn inlier_config_round_trips_from_model() {
        let model = InlierModel::StudentT {
            location: DVector::from_vec(vec![1.0, 2.0]),
            cov: CovarianceModel::diagonal(DVector::from_vec(vec![2.0, 3.0])).unwrap(),
            dof: 5.0,
        };
        let config = InlierConfig::from(&model);
        let rebuilt = config.build().unwrap();
        // Same law: equal locations and covariance matrices.
        assert_eq!(rebuilt.location(), model.location());
        let a = rebuilt.covariance_if_finite().unwrap().unwrap().to_matrix();
        let b = model.covariance_if_finite().unwrap().unwrap().to_matrix();
        assert_eq!(a, b);
    }

    #[test]
    fn datagen_and_estimate_documents_parse() {
        let text = r#"
            n = 100
            seed = 3

            [inlier]
            kind = "spherical-radial"
            location = [0.0, 0.0]

            [inlier.radial]
            kind = "half-cauchy"
            scale = 1.0

            [contamination]
            kind = "mean-shift-cluster"
            count = 5
            shift = [10.0, 10.0]
        "#;
        let file: DatagenFile = from_toml_str(text).unwrap();
        assert_eq!(file.n, 100);
        assert!(file.inlier.build().is_ok());

        let text = r#"
            k = 5

            [estimator]
            kind = "fenchel-min"
            which = "f"

            [set]
            kind = "ball"
            dim = 2
            radius = 1.0
        "#;
        let file: EstimateFile = from_toml_str(text).unwrap();
        assert_eq!(file.k, 5);
        matches!(
            file.estimator.build(0),
            EstimatorChoice::FenchelMin {
                which: MomFunction::InterquartileAverage,
                ..
            }
        );
    }
}
