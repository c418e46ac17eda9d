//! Robust multivariate mean and location estimation built from the
//! median-of-means principle and Fenchel-Legendre conjugates over symmetric
//! sets.
//!
//! Pick a symmetric set `S` (a finite point list, the canonical cross, or a
//! Euclidean ball) and the crate estimates the location of heavy-tailed,
//! adversarially contaminated samples with guarantees measured in the norm
//! `||x||_S = sup_{v in S} <v, x>`:
//!
//! - [`set`] — symmetric sets, induced norms, covariance models, Gaussian
//!   mean widths, weak variances, Rademacher complexities.
//! - [`mom`] — random equipartitions, bucketed block means, and the two
//!   median-of-means functions (inter-quartile average `f`, median `g`).
//! - [`fenchel`] — Fenchel-Legendre conjugates of `f` and `g` over `S`,
//!   exact for finite sets and via restarted sphere ascent for balls.
//! - [`estimators`] — empirical mean, coordinate-wise median-of-means,
//!   conjugate minimization, the alternating ascent/descent solver, and the
//!   minmax median-of-means objective.
//! - [`datagen`] — inlier samplers (Gaussian, coordinate-wise Cauchy,
//!   spherically symmetric, Student-t) and adversarial contamination.
//! - [`oracle`] — brute-force grid references for low-dimensional
//!   cross-checks; intentionally independent of the solver code paths.
//! - [`bench`] — Monte Carlo experiment driver, theoretical rate report,
//!   and error-vs-N slope fitting.
//! - [`verify`] — named invariant suites runnable from tests or the CLI.
//! - [`config`] / [`io`] — TOML run descriptions, delimited-text datasets
//!   with metadata sidecars, and report tables.
//!
//! Every randomized routine takes an explicit `u64` seed and is
//! deterministic given that seed; parallel trial loops derive per-trial
//! child seeds and merge results order-independently.

pub mod bench;
pub mod config;
pub mod datagen;
pub mod error;
pub mod estimators;
pub mod fenchel;
pub mod io;
pub mod mom;
pub mod oracle;
pub mod set;
pub mod verify;

mod rng;

pub use error::{Error, Result};
pub use rng::derive_seed;
pub use set::{
    gaussian_mean_width, rademacher_complexity, weak_variance, CovarianceModel, MonteCarloEstimate,
    SymmetricSet,
};
