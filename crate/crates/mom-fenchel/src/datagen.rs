//! Synthetic dataset generation: heavy-tailed inlier models and adversarial
//! contamination strategies.
//!
//! Every generator is deterministic given its seed. Contamination follows
//! the "corrupted samples" convention: an adversary picks a subset of rows
//! (of known size) and replaces or shifts them arbitrarily; the remaining
//! rows stay untouched, and the returned dataset records which indices were
//! corrupted so experiments can score estimators against the true location.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Cauchy, ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::set::{CovarianceModel, MonteCarloEstimate};

/// Law of the radius in a spherically symmetric model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLaw {
    /// Chi law with `dim` degrees of freedom: the resulting spherical model
    /// is exactly the standard Gaussian.
    Chi,
    /// Absolute value of a Cauchy variable with the given scale: all
    /// moments of order >= 1 are infinite.
    HalfCauchy { scale: f64 },
}

/// Inlier sample generators.
#[derive(Debug, Clone)]
pub enum InlierModel {
    /// Multivariate Gaussian with the given location and covariance.
    Gaussian {
        location: DVector<f64>,
        cov: CovarianceModel,
    },
    /// Independent Cauchy coordinates (no mean; the location is the
    /// coordinate-wise median).
    CoordCauchy {
        location: DVector<f64>,
        scales: DVector<f64>,
    },
    /// `location + R * U` with `U` uniform on the unit sphere and `R`
    /// drawn from `radial`.
    SphericalRadial {
        location: DVector<f64>,
        radial: RadialLaw,
    },
    /// Multivariate Student-t: `location + Sigma^{1/2} Z * sqrt(dof / W)`
    /// with `Z` standard normal and `W` chi-squared with `dof` degrees of
    /// freedom.
    StudentT {
        location: DVector<f64>,
        cov: CovarianceModel,
        dof: f64,
    },
}

impl InlierModel {
    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.location().len()
    }

    /// The model's center of symmetry (mean when it exists, otherwise the
    /// coordinate-wise median).
    pub fn location(&self) -> &DVector<f64> {
        match self {
            Self::Gaussian { location, .. }
            | Self::CoordCauchy { location, .. }
            | Self::SphericalRadial { location, .. }
            | Self::StudentT { location, .. } => location,
        }
    }

    /// The covariance matrix when it is finite: the Gaussian's `Sigma`, the
    /// identity for the chi-radial spherical model, and
    /// `Sigma * dof / (dof - 2)` for Student-t with `dof > 2`. Heavy-tailed
    /// models without second moments return `None`.
    pub fn covariance_if_finite(&self) -> Result<Option<CovarianceModel>> {
        Ok(match self {
            Self::Gaussian { cov, .. } => Some(cov.clone()),
            Self::CoordCauchy { .. } => None,
            Self::SphericalRadial { radial, .. } => match radial {
                RadialLaw::Chi => Some(CovarianceModel::identity(self.dim())?),
                RadialLaw::HalfCauchy { .. } => None,
            },
            Self::StudentT { cov, dof, .. } => {
                if *dof > 2.0 {
                    Some(cov.scaled(dof / (dof - 2.0))?)
                } else {
                    None
                }
            }
        })
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::EmptyData {
                context: "inlier model location",
            });
        }
        if self.location().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "location",
                reason: "non-finite coordinate".into(),
            });
        }
        match self {
            Self::Gaussian { cov, .. } => {
                if cov.dim() != d {
                    return Err(Error::DimensionMismatch {
                        context: "Gaussian covariance",
                        expected: d,
                        found: cov.dim(),
                    });
                }
            }
            Self::CoordCauchy { scales, .. } => {
                if scales.len() != d {
                    return Err(Error::DimensionMismatch {
                        context: "Cauchy scales",
                        expected: d,
                        found: scales.len(),
                    });
                }
                if scales.iter().any(|&s| !s.is_finite() || s <= 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "scales",
                        reason: "every Cauchy scale must be finite and positive".into(),
                    });
                }
            }
            Self::SphericalRadial { radial, .. } => {
                if let RadialLaw::HalfCauchy { scale } = radial {
                    if !scale.is_finite() || *scale <= 0.0 {
                        return Err(Error::InvalidParameter {
                            name: "scale",
                            reason: "the radial Cauchy scale must be finite and positive".into(),
                        });
                    }
                }
            }
            Self::StudentT { cov, dof, .. } => {
                if cov.dim() != d {
                    return Err(Error::DimensionMismatch {
                        context: "Student-t covariance",
                        expected: d,
                        found: cov.dim(),
                    });
                }
                if !dof.is_finite() || *dof <= 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "dof",
                        reason: "degrees of freedom must be finite and positive".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Draws `n` rows into an `n x dim` matrix.
    pub fn sample_inliers(&self, n: usize, seed: u64) -> Result<DMatrix<f64>> {
        self.validate()?;
        let mut rng = rng_from_seed(seed);
        let d = self.dim();
        let mut out = DMatrix::zeros(n, d);
        match self {
            Self::Gaussian { location, cov } => {
                for i in 0..n {
                    let z = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                    let row = location + cov.apply_sqrt(&z)?;
                    out.row_mut(i).copy_from(&row.transpose());
                }
            }
            Self::CoordCauchy { location, scales } => {
                for i in 0..n {
                    for j in 0..d {
                        let c = Cauchy::new(location[j], scales[j]).map_err(|e| {
                            Error::InvalidParameter {
                                name: "scales",
                                reason: e.to_string(),
                            }
                        })?;
                        out[(i, j)] = c.sample(&mut rng);
                    }
                }
            }
            Self::SphericalRadial { location, radial } => {
                for i in 0..n {
                    let u = random_unit_vector(d, &mut rng);
                    let r = match radial {
                        RadialLaw::Chi => {
                            let chi2 =
                                ChiSquared::new(d as f64).map_err(|e| Error::InvalidParameter {
                                    name: "dim",
                                    reason: e.to_string(),
                                })?;
                            chi2.sample(&mut rng).sqrt()
                        }
                        RadialLaw::HalfCauchy { scale } => {
                            let c =
                                Cauchy::new(0.0, *scale).map_err(|e| Error::InvalidParameter {
                                    name: "scale",
                                    reason: e.to_string(),
                                })?;
                            c.sample(&mut rng).abs()
                        }
                    };
                    let row = location + u * r;
                    out.row_mut(i).copy_from(&row.transpose());
                }
            }
            Self::StudentT { location, cov, dof } => {
                let chi2 = ChiSquared::new(*dof).map_err(|e| Error::InvalidParameter {
                    name: "dof",
                    reason: e.to_string(),
                })?;
                for i in 0..n {
                    let z = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                    let w: f64 = chi2.sample(&mut rng);
                    let row = location + cov.apply_sqrt(&z)? * (dof / w).sqrt();
                    out.row_mut(i).copy_from(&row.transpose());
                }
            }
        }
        Ok(out)
    }
}

fn random_unit_vector(d: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 0.0 {
            return v / n;
        }
    }
}

/// How corrupted rows point away from the bulk.
#[derive(Debug, Clone)]
pub enum OutlierDirection {
    /// Every corrupted row is `magnitude * direction` for this fixed unit
    /// direction (normalized at use).
    Fixed(DVector<f64>),
    /// Each corrupted row gets an independent uniform random unit
    /// direction.
    RandomUnit,
}

/// Adversarial contamination applied after the inliers are drawn.
#[derive(Debug, Clone)]
pub enum ContaminationStrategy {
    /// No contamination.
    None,
    /// Replace `count` randomly chosen rows by `magnitude * direction`.
    FarPoint {
        count: usize,
        magnitude: f64,
        direction: OutlierDirection,
    },
    /// Replace the `count` rows of largest Euclidean norm by a fixed row —
    /// an adversary erasing the most informative tail points.
    LargestNorm {
        count: usize,
        replacement: DVector<f64>,
    },
    /// Add `shift` to `count` randomly chosen rows, forming a displaced
    /// cluster that is hard to screen by magnitude alone.
    MeanShiftCluster { count: usize, shift: DVector<f64> },
}

impl ContaminationStrategy {
    /// Number of corrupted rows this strategy will produce.
    pub fn count(&self) -> usize {
        match self {
            Self::None => 0,
            Self::FarPoint { count, .. }
            | Self::LargestNorm { count, .. }
            | Self::MeanShiftCluster { count, .. } => *count,
        }
    }
}

/// A dataset together with the ground truth of which rows were corrupted.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminatedDataset {
    /// The `n x d` sample matrix, outliers included.
    pub data: DMatrix<f64>,
    /// Sorted indices of the corrupted rows.
    pub outlier_indices: Vec<usize>,
    /// The master seed the dataset was drawn from.
    pub seed: u64,
}

/// Draws `n` inliers from `model`, then applies `strategy`.
///
/// Uses child seeds of `seed` for the inlier draw and the contamination,
/// so the same seed always yields the same dataset.
pub fn generate_dataset(
    model: &InlierModel,
    strategy: &ContaminationStrategy,
    n: usize,
    seed: u64,
) -> Result<ContaminatedDataset> {
    if n == 0 {
        return Err(Error::EmptyData {
            context: "dataset size",
        });
    }
    let d = model.dim();
    let count = strategy.count();
    if count > n {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: format!("cannot corrupt {count} of {n} rows"),
        });
    }
    let mut data = model.sample_inliers(n, derive_seed(seed, 0))?;
    let mut rng = rng_from_seed(derive_seed(seed, 1));
    let mut outlier_indices: Vec<usize> = match strategy {
        ContaminationStrategy::None => Vec::new(),
        ContaminationStrategy::FarPoint {
            count,
            magnitude,
            direction,
        } => {
            if !magnitude.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "magnitude",
                    reason: "must be finite".into(),
                });
            }
            let fixed_unit = match direction {
                OutlierDirection::Fixed(v) => {
                    if v.len() != d {
                        return Err(Error::DimensionMismatch {
                            context: "outlier direction",
                            expected: d,
                            found: v.len(),
                        });
                    }
                    let norm = v.norm();
                    if !norm.is_finite() || norm <= 0.0 {
                        return Err(Error::InvalidParameter {
                            name: "direction",
                            reason: "must be a nonzero finite vector".into(),
                        });
                    }
                    Some(v / norm)
                }
                OutlierDirection::RandomUnit => None,
            };
            let idx = sample_indices(&mut rng, n, *count).into_vec();
            for &i in &idx {
                let u = match &fixed_unit {
                    Some(u) => u.clone(),
                    None => random_unit_vector(d, &mut rng),
                };
                data.row_mut(i).copy_from(&(u * *magnitude).transpose());
            }
            idx
        }
        ContaminationStrategy::LargestNorm { count, replacement } => {
            if replacement.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "outlier replacement",
                    expected: d,
                    found: replacement.len(),
                });
            }
            let mut by_norm: Vec<(f64, usize)> = (0..n).map(|i| (data.row(i).norm(), i)).collect();
            // Largest norm first; ties favour the smaller row index.
            by_norm.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
            let idx: Vec<usize> = by_norm[..*count].iter().map(|&(_, i)| i).collect();
            for &i in &idx {
                data.row_mut(i).copy_from(&replacement.transpose());
            }
            idx
        }
        ContaminationStrategy::MeanShiftCluster { count, shift } => {
            if shift.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "outlier shift",
                    expected: d,
                    found: shift.len(),
                });
            }
            let idx = sample_indices(&mut rng, n, *count).into_vec();
            for &i in &idx {
                for j in 0..d {
                    data[(i, j)] += shift[j];
                }
            }
            idx
        }
    };
    outlier_indices.sort_unstable();
    Ok(ContaminatedDataset {
        data,
        outlier_indices,
        seed,
    })
}

/// Monte Carlo estimate of the block-mean tail function
///
/// ```text
/// H(r) = P( <block mean - location, v> > r )
/// ```
///
/// where one block holds `n / k` independent inlier draws. Each trial draws
/// only a single block (`n / k` samples), so `n_trials` trials cost
/// `n_trials * n / k` samples in total. Returns the exceedance frequency
/// with its binomial standard error.
pub fn estimate_tail_h(
    model: &InlierModel,
    n: usize,
    k: usize,
    v: &DVector<f64>,
    r: f64,
    n_trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if v.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "tail projection direction",
            expected: model.dim(),
            found: v.len(),
        });
    }
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidBlockCount {
            k,
            n,
            reason: "the tail function needs a block count dividing the sample size".into(),
        });
    }
    if n_trials == 0 {
        return Err(Error::InvalidParameter {
            name: "n_trials",
            reason: "at least one trial is required".into(),
        });
    }
    let m = n / k;
    let location = model.location();
    let mut hits = 0usize;
    for trial in 0..n_trials {
        let block = model.sample_inliers(m, derive_seed(seed, trial as u64))?;
        let mut proj_sum = 0.0;
        for i in 0..m {
            let row = block.row(i);
            let mut dot = 0.0;
            for j in 0..v.len() {
                dot += (row[j] - location[j]) * v[j];
            }
            proj_sum += dot;
        }
        if proj_sum / m as f64 > r {
            hits += 1;
        }
    }
    let p = hits as f64 / n_trials as f64;
    let std_error = (p * (1.0 - p) / n_trials as f64).sqrt();
    Ok(MonteCarloEstimate {
        mean: p,
        std_error,
        n_samples: n_trials,
    })
}
