//! Fenchel-Legendre conjugates of the median-of-means functions over a
//! symmetric set.
//!
//! For `h` one of the directional statistics (`f` or `g`) the conjugate is
//!
//! ```text
//! h*_S(mu) = sup_{v in S} ( <mu, v> - h(v) )
//! ```
//!
//! a convex function of `mu` (a supremum of affine maps) whose minimizers
//! are the location estimators downstream. Finite sets are evaluated by
//! exact enumeration with values of `h` cached per context; the Euclidean
//! ball runs a restarted projected subgradient ascent on the unit sphere.
//!
//! The regularized objective `H(v) = h(v) + ||v||_S^2 / 4` has conjugate
//!
//! ```text
//! H*_S(mu) = max(0, sup_{||w||_S = 1} ( <mu, w> - h(w) ))^2
//! ```
//!
//! obtained by optimizing the scale `theta >= 0` of `v = theta w` in closed
//! form. The sphere-restricted supremum reuses the same directional search
//! as the plain conjugate, restricted to `||.||_S`-normalized directions.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mom::{BucketedMeans, MomFunction};
use crate::rng::rng_from_seed;
use crate::set::SymmetricSet;

/// Consecutive non-improving inner iterations before an ascent is stopped.
const ASCENT_STALL_LIMIT: usize = 50;

/// Settings for the sphere-ascent inner maximizer used by ball conjugates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolverConfig {
    /// Number of ascents; the first starts at `mu / ||mu||_2`, the second at
    /// the warm-start maximizer when one is supplied, the rest at random
    /// unit vectors.
    pub restarts: usize,
    /// Iteration cap per ascent.
    pub max_iters: usize,
    /// Initial step `a` of the `a / sqrt(t)` schedule.
    pub step_init: f64,
    /// Objective improvement below which an iteration counts as stalled.
    pub tolerance: f64,
    /// Seed for the random restart directions.
    pub seed: u64,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 500,
            step_init: 0.1,
            tolerance: 1e-9,
            seed: 0x01a5_ce4d,
        }
    }
}

/// Outcome of a conjugate evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerResult {
    /// The (approximate) supremum value.
    pub value: f64,
    /// A maximizer: a point of `S` for [`ObjectiveContext::eval_conjugate`],
    /// the optimal unconstrained `nu` for
    /// [`ObjectiveContext::eval_regularized_conjugate`].
    pub maximizer: DVector<f64>,
    /// True when the value is an exact enumeration maximum (finite sets),
    /// false when it comes from the heuristic sphere ascent (ball).
    pub certified: bool,
}

/// Precomputed state for repeated conjugate evaluations against one block
/// summary, one symmetric set, and one choice of MOM function.
///
/// For finite sets the constructor caches `h(v)` and `||v||_S` for every
/// enumerated point, so each subsequent evaluation is a linear scan of dot
/// products. Evaluations are pure functions of `(mu, context)`.
#[derive(Debug, Clone)]
pub struct ObjectiveContext<'a> {
    means: &'a BucketedMeans,
    set: &'a SymmetricSet,
    which: MomFunction,
    inner: InnerSolverConfig,
    cache: Option<FiniteCache>,
}

#[derive(Debug, Clone)]
struct FiniteCache {
    points: Vec<DVector<f64>>,
    h_values: Vec<f64>,
    s_norms: Vec<f64>,
}

impl<'a> ObjectiveContext<'a> {
    /// Builds a context, validating dimensions and the odd block count.
    pub fn new(
        means: &'a BucketedMeans,
        set: &'a SymmetricSet,
        which: MomFunction,
        inner: InnerSolverConfig,
    ) -> Result<Self> {
        if means.dim() != set.dim() {
            return Err(Error::DimensionMismatch {
                context: "objective context",
                expected: set.dim(),
                found: means.dim(),
            });
        }
        if means.block_count().is_multiple_of(2) {
            return Err(Error::InvalidBlockCount {
                k: means.block_count(),
                n: 0,
                reason: "conjugate objectives require an odd block count".into(),
            });
        }
        let cache = match set.enumerated_points() {
            Some(points) => {
                let h_values = points
                    .iter()
                    .map(|p| which.evaluate(p, means))
                    .collect::<Result<Vec<_>>>()?;
                let s_norms = points
                    .iter()
                    .map(|p| set.norm_s(p))
                    .collect::<Result<Vec<_>>>()?;
                Some(FiniteCache {
                    points,
                    h_values,
                    s_norms,
                })
            }
            None => None,
        };
        Ok(Self {
            means,
            set,
            which,
            inner,
            cache,
        })
    }

    /// The block summary this context evaluates against.
    pub fn means(&self) -> &BucketedMeans {
        self.means
    }

    /// The symmetric set defining the supremum domain.
    pub fn set(&self) -> &SymmetricSet {
        self.set
    }

    /// Which MOM function is being conjugated.
    pub fn which(&self) -> MomFunction {
        self.which
    }

    /// Evaluates `h*_S(mu) = sup_{v in S} (<mu, v> - h(v))`.
    pub fn eval_conjugate(&self, mu: &DVector<f64>) -> Result<InnerResult> {
        self.eval_conjugate_warm(mu, None)
    }

    /// [`Self::eval_conjugate`] with an optional warm-start direction for
    /// the ball's sphere ascent (ignored for finite sets, where evaluation
    /// is exact).
    pub fn eval_conjugate_warm(
        &self,
        mu: &DVector<f64>,
        warm: Option<&DVector<f64>>,
    ) -> Result<InnerResult> {
        self.check_mu(mu)?;
        match &self.cache {
            Some(cache) => {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for (i, p) in cache.points.iter().enumerate() {
                    let s = mu.dot(p) - cache.h_values[i];
                    if s > best {
                        best = s;
                        arg = i;
                    }
                }
                Ok(InnerResult {
                    value: best,
                    maximizer: cache.points[arg].clone(),
                    certified: true,
                })
            }
            None => {
                let (_, radius) = self.set.as_ball().expect("uncached set is the ball");
                let (phi, u) = self.sphere_ascent(mu, warm)?;
                Ok(InnerResult {
                    value: radius * phi,
                    maximizer: u * radius,
                    certified: false,
                })
            }
        }
    }

    /// Evaluates the conjugate of the regularized objective
    /// `H(v) = h(v) + ||v||_S^2 / 4`:
    /// `H*_S(mu) = max(0, sup_{||w||_S = 1} (<mu, w> - h(w)))^2`.
    ///
    /// Requires `S` to span the ambient space (otherwise `||.||_S` is only a
    /// seminorm and the supremum may be infinite).
    pub fn eval_regularized_conjugate(&self, mu: &DVector<f64>) -> Result<InnerResult> {
        self.eval_regularized_conjugate_warm(mu, None)
    }

    /// [`Self::eval_regularized_conjugate`] with an optional warm start.
    pub fn eval_regularized_conjugate_warm(
        &self,
        mu: &DVector<f64>,
        warm: Option<&DVector<f64>>,
    ) -> Result<InnerResult> {
        self.check_mu(mu)?;
        if !self.set.spans_full_space() {
            return Err(Error::DegenerateSpan {
                ambient: self.set.dim(),
            });
        }
        match &self.cache {
            Some(cache) => {
                // Directions are the enumerated points normalized to
                // ||w||_S = 1; h is positively homogeneous so h(w) scales.
                let mut best = f64::NEG_INFINITY;
                let mut arg = usize::MAX;
                for (i, p) in cache.points.iter().enumerate() {
                    if cache.s_norms[i] <= 0.0 {
                        continue;
                    }
                    let m = (mu.dot(p) - cache.h_values[i]) / cache.s_norms[i];
                    if m > best {
                        best = m;
                        arg = i;
                    }
                }
                if arg == usize::MAX {
                    return Err(Error::DegenerateSpan {
                        ambient: self.set.dim(),
                    });
                }
                let clipped = best.max(0.0);
                let scale = 2.0 * clipped / cache.s_norms[arg];
                Ok(InnerResult {
                    value: clipped * clipped,
                    maximizer: &cache.points[arg] * scale,
                    certified: true,
                })
            }
            None => {
                let (_, radius) = self.set.as_ball().expect("uncached set is the ball");
                // ||w||_S = radius * ||w||_2, so unit-S-norm directions are
                // u / radius with u on the Euclidean unit sphere, and
                // m(u / radius) = phi(u) / radius.
                let (phi, u) = self.sphere_ascent(mu, warm)?;
                let m = (phi / radius).max(0.0);
                Ok(InnerResult {
                    value: m * m,
                    maximizer: u * (2.0 * m / radius),
                    certified: false,
                })
            }
        }
    }

    /// A subgradient of `mu -> h*_S(mu)`: the maximizer found by
    /// [`Self::eval_conjugate`] (envelope theorem for suprema of affine
    /// maps).
    pub fn conjugate_subgradient(&self, mu: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.eval_conjugate(mu)?.maximizer)
    }

    fn check_mu(&self, mu: &DVector<f64>) -> Result<()> {
        if mu.len() != self.set.dim() {
            return Err(Error::DimensionMismatch {
                context: "conjugate evaluation",
                expected: self.set.dim(),
                found: mu.len(),
            });
        }
        Ok(())
    }

    /// Restarted projected subgradient ascent of
    /// `phi(u) = <mu, u> - h(u)` over the Euclidean unit sphere.
    ///
    /// Returns the best visited `(phi(u), u)`. Since `phi(-u) = -phi(u)`,
    /// a negative best is flipped to its antipode, so the result is always
    /// nonnegative up to roundoff.
    fn sphere_ascent(
        &self,
        mu: &DVector<f64>,
        warm: Option<&DVector<f64>>,
    ) -> Result<(f64, DVector<f64>)> {
        let d = mu.len();
        let cfg = &self.inner;
        let mut rng = rng_from_seed(cfg.seed);
        let mut starts: Vec<DVector<f64>> = Vec::with_capacity(cfg.restarts.max(2));
        let mu_norm = mu.norm();
        if mu_norm > 0.0 {
            starts.push(mu / mu_norm);
        }
        if let Some(w) = warm {
            let n = w.norm();
            if n > 0.0 {
                starts.push(w / n);
            }
        }
        while starts.len() < cfg.restarts.max(1) {
            starts.push(random_unit(d, &mut rng));
        }

        let mut best = f64::NEG_INFINITY;
        let mut best_u = DVector::zeros(d);
        for start in starts {
            let (val, u) = self.single_ascent(mu, start, &mut rng)?;
            if val > best {
                best = val;
                best_u = u;
            }
        }
        if best < 0.0 {
            // phi is odd: the antipode dominates. Re-evaluate there so the
            // returned pair stays consistent.
            let flipped = -best_u;
            let (h, _) = self.which.value_and_subgradient(&flipped, self.means)?;
            best = mu.dot(&flipped) - h;
            best_u = flipped;
        }
        Ok((best, best_u))
    }

    fn single_ascent(
        &self,
        mu: &DVector<f64>,
        start: DVector<f64>,
        rng: &mut impl Rng,
    ) -> Result<(f64, DVector<f64>)> {
        let cfg = &self.inner;
        let mut u = start;
        let mut best = f64::NEG_INFINITY;
        let mut best_u = u.clone();
        let mut stall = 0usize;
        for t in 1..=cfg.max_iters {
            let (h, sub) = self.which.value_and_subgradient(&u, self.means)?;
            let value = mu.dot(&u) - h;
            if value > best {
                if value > best + cfg.tolerance {
                    stall = 0;
                } else {
                    stall += 1;
                }
                best = value;
                best_u = u.clone();
            } else {
                stall += 1;
            }
            if stall >= ASCENT_STALL_LIMIT {
                break;
            }
            let step = cfg.step_init / (t as f64).sqrt();
            u += (mu - sub) * step;
            let n = u.norm();
            if n == 0.0 {
                u = random_unit(mu.len(), rng);
            } else {
                u /= n;
            }
        }
        Ok((best, best_u))
    }
}

fn random_unit(d: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 0.0 {
            return v / n;
        }
    }
}
