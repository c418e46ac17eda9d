//! Symmetric sets, the norms they induce, and covariance models.
//!
//! A symmetric set `S` (closed under negation) induces the support-function
//! norm
//!
//! ```text
//! ||x||_S = sup_{v in S} <v, x>
//! ```
//!
//! which is a genuine norm exactly when `S` spans the ambient space, and a
//! seminorm otherwise. Three families are supported:
//!
//! | variant            | induced norm        | support maximizer        |
//! |--------------------|---------------------|--------------------------|
//! | `FinitePointSet`   | max over points     | best stored point        |
//! | `CanonicalCross`   | `l-infinity`        | `+/- e_j`                |
//! | `EuclideanBall`    | `radius * l2`       | `radius * x / ||x||_2`   |
//!
//! The module also provides the two geometric quantities that drive the
//! theoretical error rates: the Gaussian mean width `E ||Sigma^{1/2} G||_S`
//! and the weak variance `sup_{v in S} ||Sigma^{1/2} v||_2`, plus a Monte
//! Carlo Rademacher complexity for data-driven rate reports.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Relative tolerance for rank and positive-semidefiniteness decisions.
const SPECTRAL_REL_TOL: f64 = 1e-10;

/// Relative tolerance for the power-method eigenvalue iteration.
const POWER_METHOD_REL_TOL: f64 = 1e-10;

/// Iteration cap for the power method.
const POWER_METHOD_MAX_ITERS: usize = 10_000;

/// A symmetric subset of R^d, closed under negation.
///
/// Construct through [`SymmetricSet::finite_points`],
/// [`SymmetricSet::canonical_cross`], or [`SymmetricSet::euclidean_ball`];
/// the constructors enforce the symmetry and dimension invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSet {
    kind: SetKind,
}

#[derive(Debug, Clone, PartialEq)]
enum SetKind {
    /// Explicit point list, closed under negation by construction.
    Points {
        points: Vec<DVector<f64>>,
        full_span: bool,
    },
    /// `{ +e_1, ..., +e_d, -e_1, ..., -e_d }`, inducing the l-infinity norm.
    Cross { dim: usize },
    /// Centered Euclidean ball, inducing `radius * l2`.
    Ball { dim: usize, radius: f64 },
}

impl SymmetricSet {
    /// Builds a finite symmetric set from a point list.
    ///
    /// The list is augmented with the negation of every point that does not
    /// already have one (exact comparison), so the stored list is closed
    /// under negation. Enumeration order is the user's points first, then
    /// the appended negations; tie-breaking in [`Self::support_argmax`]
    /// follows this order.
    pub fn finite_points(points: Vec<DVector<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyData {
                context: "finite symmetric set needs at least one point",
            });
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: "zero-dimensional points".into(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "finite point list",
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "points",
                    reason: format!("point {i} has a non-finite entry"),
                });
            }
        }
        let mut closed = points.clone();
        for p in &points {
            let neg = -p;
            if !closed.iter().any(|q| q == &neg) {
                closed.push(neg);
            }
        }
        let full_span = full_span(&closed, dim);
        Ok(Self {
            kind: SetKind::Points {
                points: closed,
                full_span,
            },
        })
    }

    /// Builds the canonical cross `{ +/- e_j }` in dimension `dim`.
    pub fn canonical_cross(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        Ok(Self {
            kind: SetKind::Cross { dim },
        })
    }

    /// Builds the centered Euclidean ball of the given radius.
    pub fn euclidean_ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: format!("radius must be positive and finite, got {radius}"),
            });
        }
        Ok(Self {
            kind: SetKind::Ball { dim, radius },
        })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Points { points, .. } => points[0].len(),
            SetKind::Cross { dim } | SetKind::Ball { dim, .. } => *dim,
        }
    }

    /// True when the set spans the whole ambient space, in which case the
    /// induced seminorm is a genuine norm. Degenerate finite sets are
    /// permitted; operations that need a true norm check this flag.
    pub fn spans_full_space(&self) -> bool {
        match &self.kind {
            SetKind::Points { full_span, .. } => *full_span,
            SetKind::Cross { .. } | SetKind::Ball { .. } => true,
        }
    }

    /// Ball parameters when the set is a Euclidean ball.
    pub fn as_ball(&self) -> Option<(usize, f64)> {
        match &self.kind {
            SetKind::Ball { dim, radius } => Some((*dim, *radius)),
            _ => None,
        }
    }

    /// The stored point list for the finite variant (closed under negation).
    pub fn stored_points(&self) -> Option<&[DVector<f64>]> {
        match &self.kind {
            SetKind::Points { points, .. } => Some(points),
            _ => None,
        }
    }

    /// Enumerates the points of a finite variant in tie-break order:
    /// stored order for `FinitePointSet`, `e_1..e_d, -e_1..-e_d` for the
    /// cross. Returns `None` for the ball, which has no finite enumeration.
    pub fn enumerated_points(&self) -> Option<Vec<DVector<f64>>> {
        match &self.kind {
            SetKind::Points { points, .. } => Some(points.clone()),
            SetKind::Cross { dim } => {
                let mut pts = Vec::with_capacity(2 * dim);
                for j in 0..*dim {
                    let mut e = DVector::zeros(*dim);
                    e[j] = 1.0;
                    pts.push(e);
                }
                for j in 0..*dim {
                    let mut e = DVector::zeros(*dim);
                    e[j] = -1.0;
                    pts.push(e);
                }
                Some(pts)
            }
            SetKind::Ball { .. } => None,
        }
    }

    /// Short human-readable description for reports and config echoes.
    pub fn describe(&self) -> String {
        match &self.kind {
            SetKind::Points { points, full_span } => format!(
                "points(d={}, m={}{})",
                points[0].len(),
                points.len(),
                if *full_span { "" } else { ", degenerate" }
            ),
            SetKind::Cross { dim } => format!("cross(d={dim})"),
            SetKind::Ball { dim, radius } => format!("ball(d={dim}, r={radius})"),
        }
    }

    /// The induced seminorm `||x||_S = sup_{v in S} <v, x>`.
    pub fn norm_s(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(match &self.kind {
            SetKind::Points { points, .. } => {
                let mut best = f64::NEG_INFINITY;
                for p in points {
                    let s = p.dot(x);
                    if s > best {
                        best = s;
                    }
                }
                best
            }
            SetKind::Cross { .. } => x.iter().fold(0.0f64, |m, &v| m.max(v.abs())),
            SetKind::Ball { radius, .. } => radius * x.norm(),
        })
    }

    /// A point of `S` attaining the supremum in [`Self::norm_s`].
    ///
    /// Ties among finite candidates are broken by the lowest enumeration
    /// index. For the ball, `x = 0` returns the zero vector (every point of
    /// the ball is a maximizer there).
    pub fn support_argmax(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(x.len())?;
        Ok(match &self.kind {
            SetKind::Points { points, .. } => {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for (i, p) in points.iter().enumerate() {
                    let s = p.dot(x);
                    if s > best {
                        best = s;
                        arg = i;
                    }
                }
                points[arg].clone()
            }
            SetKind::Cross { dim } => {
                // Virtual enumeration e_1..e_d then -e_1..-e_d; strict
                // improvement keeps the lowest index on ties.
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0usize;
                for p in 0..2 * dim {
                    let val = if p < *dim { x[p] } else { -x[p - dim] };
                    if val > best {
                        best = val;
                        arg = p;
                    }
                }
                let mut v = DVector::zeros(*dim);
                if arg < *dim {
                    v[arg] = 1.0;
                } else {
                    v[arg - dim] = -1.0;
                }
                v
            }
            SetKind::Ball { radius, .. } => {
                let n = x.norm();
                if n == 0.0 {
                    DVector::zeros(x.len())
                } else {
                    x * (radius / n)
                }
            }
        })
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        let expected = self.dim();
        if found != expected {
            return Err(Error::DimensionMismatch {
                context: "symmetric set operation",
                expected,
                found,
            });
        }
        Ok(())
    }
}

/// Decides whether `points` spans R^dim, using singular values with a
/// relative cutoff.
fn full_span(points: &[DVector<f64>], dim: usize) -> bool {
    if points.len() < dim {
        return false;
    }
    let mat = DMatrix::from_fn(points.len(), dim, |i, j| points[i][j]);
    let sv = mat.singular_values();
    let top = sv.max();
    if top <= 0.0 {
        return false;
    }
    sv.iter().filter(|&&s| s > SPECTRAL_REL_TOL * top).count() == dim
}

/// Covariance model for inlier generators and theoretical rates.
///
/// The dense variant caches the symmetric square root (eigendecomposition
/// with negative eigenvalues clipped to zero) at construction.
#[derive(Debug, Clone)]
pub struct CovarianceModel {
    dim: usize,
    kind: CovKind,
}

#[derive(Debug, Clone)]
enum CovKind {
    Identity,
    Diagonal {
        entries: DVector<f64>,
        sqrt_entries: DVector<f64>,
    },
    Dense {
        matrix: DMatrix<f64>,
        sqrt: DMatrix<f64>,
    },
}

impl CovarianceModel {
    /// Identity covariance in dimension `dim`.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        Ok(Self {
            dim,
            kind: CovKind::Identity,
        })
    }

    /// Diagonal covariance. Entries must be nonnegative up to a relative
    /// tolerance of `1e-10 * max entry`; tiny negatives are clipped to zero.
    pub fn diagonal(entries: DVector<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyData {
                context: "diagonal covariance entries",
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "entries",
                reason: "non-finite diagonal entry".into(),
            });
        }
        let top = entries.iter().fold(0.0f64, |m, &x| m.max(x));
        let tol = SPECTRAL_REL_TOL * top.max(0.0);
        if let Some(min) = entries.iter().copied().reduce(f64::min) {
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                    tolerance: tol,
                });
            }
        }
        let dim = entries.len();
        let clipped = entries.map(|x| x.max(0.0));
        let sqrt_entries = clipped.map(f64::sqrt);
        Ok(Self {
            dim,
            kind: CovKind::Diagonal {
                entries: clipped,
                sqrt_entries,
            },
        })
    }

    /// Dense covariance. The matrix must be symmetric (checked at relative
    /// tolerance `1e-10`) with eigenvalues above `-1e-10 * lambda_max`;
    /// negative eigenvalues within tolerance are clipped to zero before the
    /// square root is cached.
    pub fn dense(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 {
            return Err(Error::EmptyData {
                context: "dense covariance matrix",
            });
        }
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                context: "dense covariance matrix",
                expected: dim,
                found: matrix.ncols(),
            });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "non-finite entry".into(),
            });
        }
        let scale = matrix.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let asym = (&matrix - matrix.transpose())
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()));
        if asym > SPECTRAL_REL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("not symmetric: max asymmetry {asym:.3e}"),
            });
        }
        let eig = nalgebra::SymmetricEigen::new(matrix.clone());
        let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x));
        let tol = SPECTRAL_REL_TOL * lambda_max.max(0.0);
        if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                    tolerance: tol,
                });
            }
        }
        let sqrt_eigs = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let q = &eig.eigenvectors;
        let sqrt = q * DMatrix::from_diagonal(&sqrt_eigs) * q.transpose();
        Ok(Self {
            dim,
            kind: CovKind::Dense { matrix, sqrt },
        })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the cached square root: `v -> Sigma^{1/2} v`.
    pub fn apply_sqrt(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(v.len())?;
        Ok(match &self.kind {
            CovKind::Identity => v.clone(),
            CovKind::Diagonal { sqrt_entries, .. } => v.component_mul(sqrt_entries),
            CovKind::Dense { sqrt, .. } => sqrt * v,
        })
    }

    /// The quadratic form `v^T Sigma v` (clipped at zero against roundoff).
    pub fn quadratic_form(&self, v: &DVector<f64>) -> Result<f64> {
        self.check_dim(v.len())?;
        let q = match &self.kind {
            CovKind::Identity => v.norm_squared(),
            CovKind::Diagonal { entries, .. } => {
                v.iter().zip(entries.iter()).map(|(&x, &l)| l * x * x).sum()
            }
            CovKind::Dense { matrix, .. } => v.dot(&(matrix * v)),
        };
        Ok(q.max(0.0))
    }

    /// The covariance scaled by a nonnegative factor: `factor * Sigma`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::InvalidParameter {
                name: "factor",
                reason: format!("scaling factor must be finite and nonnegative, got {factor}"),
            });
        }
        let kind = match &self.kind {
            CovKind::Identity => CovKind::Diagonal {
                entries: DVector::from_element(self.dim, factor),
                sqrt_entries: DVector::from_element(self.dim, factor.sqrt()),
            },
            CovKind::Diagonal {
                entries,
                sqrt_entries,
            } => CovKind::Diagonal {
                entries: entries * factor,
                sqrt_entries: sqrt_entries * factor.sqrt(),
            },
            CovKind::Dense { matrix, sqrt } => CovKind::Dense {
                matrix: matrix * factor,
                sqrt: sqrt * factor.sqrt(),
            },
        };
        Ok(Self {
            dim: self.dim,
            kind,
        })
    }

    /// The covariance as an explicit dense matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        match &self.kind {
            CovKind::Identity => DMatrix::identity(self.dim, self.dim),
            CovKind::Diagonal { entries, .. } => DMatrix::from_diagonal(entries),
            CovKind::Dense { matrix, .. } => matrix.clone(),
        }
    }

    /// Largest eigenvalue of `Sigma`.
    ///
    /// Exact for the identity and diagonal variants; the dense variant runs
    /// a power iteration to relative tolerance `1e-10` (at most `10^4`
    /// iterations) and reports non-convergence as a diagnostic error
    /// carrying the last estimate.
    pub fn top_eigenvalue(&self) -> Result<f64> {
        match &self.kind {
            CovKind::Identity => Ok(1.0),
            CovKind::Diagonal { entries, .. } => Ok(entries.iter().fold(0.0f64, |m, &x| m.max(x))),
            CovKind::Dense { matrix, .. } => power_method_top_eigenvalue(matrix),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                context: "covariance operation",
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// Power iteration for the top eigenvalue of a symmetric PSD matrix.
fn power_method_top_eigenvalue(matrix: &DMatrix<f64>) -> Result<f64> {
    // Fixed internal seed: the start vector only needs a nonzero component
    // in the top eigenspace, which holds almost surely.
    let mut rng = rng_from_seed(0x7077_6572);
    let d = matrix.nrows();
    let mut v = loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 0.0 {
            break v / n;
        }
    };
    let mut last = f64::NAN;
    for iter in 0..POWER_METHOD_MAX_ITERS {
        let w = matrix * &v;
        let estimate = v.dot(&w);
        let n = w.norm();
        if n == 0.0 {
            // The iterate was annihilated: for a PSD matrix this certifies
            // that the random start lay in the null space, which happens
            // only when the matrix is (numerically) zero.
            return Ok(0.0);
        }
        if iter > 0 && (estimate - last).abs() <= POWER_METHOD_REL_TOL * estimate.abs() {
            return Ok(estimate.max(0.0));
        }
        last = estimate;
        v = w / n;
    }
    Err(Error::PowerMethodDiverged {
        iterations: POWER_METHOD_MAX_ITERS,
        last_estimate: last,
    })
}

/// A Monte Carlo scalar estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Sample mean of the simulated quantity.
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation / sqrt(n)).
    pub std_error: f64,
    /// Number of Monte Carlo samples.
    pub n_samples: usize,
}

/// Monte Carlo estimate of the Gaussian mean width `E ||Sigma^{1/2} G||_S`
/// with `G ~ N(0, I_d)`.
///
/// Deterministic for a fixed seed. Requires `n_samples >= 2` so the
/// standard error is defined.
pub fn gaussian_mean_width(
    set: &SymmetricSet,
    cov: &CovarianceModel,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if cov.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            context: "gaussian_mean_width",
            expected: set.dim(),
            found: cov.dim(),
        });
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "need at least 2 samples".into(),
        });
    }
    let d = set.dim();
    let mut rng = rng_from_seed(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let g = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = cov.apply_sqrt(&g)?;
        let w = set.norm_s(&x)?;
        sum += w;
        sum_sq += w * w;
    }
    Ok(finish_monte_carlo(sum, sum_sq, n_samples))
}

/// Monte Carlo Rademacher complexity
/// `E_eps || N^{-1/2} sum_i eps_i (X_i - center) ||_S`
/// over independent sign vectors `eps in {-1, +1}^N`.
pub fn rademacher_complexity(
    data: &DMatrix<f64>,
    center: &DVector<f64>,
    set: &SymmetricSet,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let n = data.nrows();
    let d = data.ncols();
    if n == 0 {
        return Err(Error::EmptyData {
            context: "rademacher_complexity data",
        });
    }
    if d != set.dim() {
        return Err(Error::DimensionMismatch {
            context: "rademacher_complexity",
            expected: set.dim(),
            found: d,
        });
    }
    if center.len() != d {
        return Err(Error::DimensionMismatch {
            context: "rademacher_complexity center",
            expected: d,
            found: center.len(),
        });
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "need at least 2 samples".into(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let mut s = DVector::zeros(d);
        for i in 0..n {
            let eps: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            for j in 0..d {
                s[j] += eps * (data[(i, j)] - center[j]);
            }
        }
        let w = set.norm_s(&(s * scale))?;
        sum += w;
        sum_sq += w * w;
    }
    Ok(finish_monte_carlo(sum, sum_sq, n_samples))
}

/// Weak variance `sup_{v in S} ||Sigma^{1/2} v||_2`.
///
/// Exact maximum over points for the finite variants; for the ball it is
/// `radius * sqrt(lambda_max(Sigma))` via [`CovarianceModel::top_eigenvalue`].
pub fn weak_variance(set: &SymmetricSet, cov: &CovarianceModel) -> Result<f64> {
    if cov.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            context: "weak_variance",
            expected: set.dim(),
            found: cov.dim(),
        });
    }
    match set.enumerated_points() {
        Some(points) => {
            let mut best = 0.0f64;
            for p in &points {
                best = best.max(cov.quadratic_form(p)?.sqrt());
            }
            Ok(best)
        }
        None => {
            let (_, radius) = set.as_ball().expect("non-finite set is the ball");
            Ok(radius * cov.top_eigenvalue()?.sqrt())
        }
    }
}

fn finish_monte_carlo(sum: f64, sum_sq: f64, n: usize) -> MonteCarloEstimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    MonteCarloEstimate {
        mean,
        std_error: (var / nf).sqrt(),
        n_samples: n,
    }
}
