//! Monte Carlo experiment engine: runs (sample, contaminate, estimate)
//! pipelines over a grid of `(N, K)` cells, aggregates error quantiles
//! against the empirical-mean baseline, evaluates the theoretical rate
//! expressions, and fits the error-versus-`N` slope.
//!
//! Trials are independent tasks executed in parallel; each owns a generator
//! seeded from `(master seed, cell, trial)`, and results are merged by
//! trial index, so reports are reproducible bit-for-bit from the config and
//! master seed (wall-clock timings excepted).

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::datagen::{generate_dataset, ContaminationStrategy, InlierModel};
use crate::error::{Error, Result};
use crate::estimators::{
    coordinatewise_mom, empirical_mean, solve_alternating, solve_fenchel_min, EstimateResult,
    SolverConfig,
};
use crate::mom::{make_partition, MomFunction};
use crate::rng::{derive_seed, derive_seed2};
use crate::set::{
    gaussian_mean_width, rademacher_complexity, weak_variance, MonteCarloEstimate, SymmetricSet,
};

/// Which estimator the experiment pipeline runs on each trial.
#[derive(Debug, Clone)]
pub enum EstimatorChoice {
    /// Arithmetic mean of all rows (the non-robust baseline as the subject).
    EmpiricalMean,
    /// Coordinate-wise median of block means.
    CoordinatewiseMom,
    /// Subgradient descent on the plain conjugate objective.
    FenchelMin {
        which: MomFunction,
        solver: SolverConfig,
    },
    /// Alternating ascent/descent on the regularized objective.
    Alternating {
        which: MomFunction,
        solver: SolverConfig,
    },
}

impl EstimatorChoice {
    /// Short human-readable identifier (used in report headers).
    pub fn describe(&self) -> String {
        match self {
            Self::EmpiricalMean => "empirical-mean".into(),
            Self::CoordinatewiseMom => "coordinatewise-mom".into(),
            Self::FenchelMin { which, .. } => format!("fenchel-min-{}", which.letter()),
            Self::Alternating { which, .. } => format!("alternating-{}", which.letter()),
        }
    }

    /// Runs this estimator on one dataset (rows = samples) with `k` blocks.
    /// `seed` drives the partition draw and any solver randomness,
    /// overriding the seed stored in the solver config so that one value
    /// pins the whole run. The set is used only by the iterative solvers.
    pub fn run(
        &self,
        data: &DMatrix<f64>,
        k: usize,
        set: &SymmetricSet,
        seed: u64,
    ) -> Result<EstimatorRun> {
        match self {
            Self::EmpiricalMean => Ok(EstimatorRun {
                mu_hat: empirical_mean(data)?,
                converged: true,
                solver: None,
            }),
            Self::CoordinatewiseMom => {
                let partition = make_partition(data.nrows(), k, derive_seed(seed, 0))?;
                Ok(EstimatorRun {
                    mu_hat: coordinatewise_mom(data, &partition)?,
                    converged: true,
                    solver: None,
                })
            }
            Self::FenchelMin { which, solver } => {
                let solver = SolverConfig {
                    seed,
                    ..solver.clone()
                };
                let result = solve_fenchel_min(data, k, set, *which, &solver)?;
                Ok(EstimatorRun {
                    mu_hat: result.mu_hat.clone(),
                    converged: result.converged,
                    solver: Some(result),
                })
            }
            Self::Alternating { which, solver } => {
                let solver = SolverConfig {
                    seed,
                    ..solver.clone()
                };
                let result = solve_alternating(data, k, set, *which, &solver)?;
                Ok(EstimatorRun {
                    mu_hat: result.mu_hat.clone(),
                    converged: result.converged,
                    solver: Some(result),
                })
            }
        }
    }
}

/// Output of [`EstimatorChoice::run`] on one dataset.
#[derive(Debug, Clone)]
pub struct EstimatorRun {
    pub mu_hat: DVector<f64>,
    /// `true` for the closed-form estimators; the solvers' stopping flag
    /// otherwise.
    pub converged: bool,
    /// Objective trace for the iterative estimators, `None` for closed
    /// forms.
    pub solver: Option<EstimateResult>,
}

/// Constants entering the VC-type rate `r_diamond`; the defaults are the
/// values valid for Cauchy-type inliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstants {
    /// Concentration constant of the VC bound.
    pub c0: f64,
    /// Linear slope of the block tail function near zero.
    pub c1: f64,
}

impl Default for RateConstants {
    fn default() -> Self {
        Self {
            c0: 1.0,
            c1: 1.0 / (2.0 * std::f64::consts::PI),
        }
    }
}

/// Full description of a Monte Carlo experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Estimator under study.
    pub estimator: EstimatorChoice,
    /// Inlier sample generator; its location is the estimation target.
    pub inlier: InlierModel,
    /// Adversarial contamination applied after each inlier draw.
    pub contamination: ContaminationStrategy,
    /// Symmetric set defining the error norm and the estimators' geometry.
    pub set: SymmetricSet,
    /// Grid of `(n, k)` cells; each needs `k` odd and dividing `n`.
    pub cells: Vec<(usize, usize)>,
    /// Trials per cell.
    pub trials: usize,
    /// Confidence level: the report carries the `1 - delta` error quantile
    /// and `delta` enters the theoretical rates through `log(1/delta)`.
    pub delta: f64,
    /// Master seed; every randomized quantity derives from it.
    pub seed: u64,
    /// Monte Carlo sample count for the theoretical-rate estimates.
    pub theory_mc_samples: usize,
    /// Constants for the `r_diamond` rate.
    pub rate_constants: RateConstants,
}

impl ExperimentConfig {
    /// Config with conventional defaults: 50 trials, `delta = 0.05`,
    /// seed 0, 200 Monte Carlo samples for theory estimates.
    pub fn new(
        estimator: EstimatorChoice,
        inlier: InlierModel,
        contamination: ContaminationStrategy,
        set: SymmetricSet,
        cells: Vec<(usize, usize)>,
    ) -> Self {
        Self {
            estimator,
            inlier,
            contamination,
            set,
            cells,
            trials: 50,
            delta: 0.05,
            seed: 0,
            theory_mc_samples: 200,
            rate_constants: RateConstants::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::EmptyData {
                context: "experiment cells",
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                reason: "at least one trial per cell is required".into(),
            });
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("confidence level must lie in (0, 1), got {}", self.delta),
            });
        }
        if self.theory_mc_samples < 2 {
            return Err(Error::InvalidParameter {
                name: "theory_mc_samples",
                reason: "need at least 2 Monte Carlo samples".into(),
            });
        }
        if self.inlier.dim() != self.set.dim() {
            return Err(Error::DimensionMismatch {
                context: "experiment set vs inlier model",
                expected: self.inlier.dim(),
                found: self.set.dim(),
            });
        }
        for &(n, k) in &self.cells {
            if k == 0 || k > n || k % 2 == 0 || n % k != 0 {
                return Err(Error::InvalidBlockCount {
                    k,
                    n,
                    reason: "each cell needs an odd block count dividing the sample size".into(),
                });
            }
            if self.contamination.count() > n {
                return Err(Error::InvalidParameter {
                    name: "contamination",
                    reason: format!(
                        "cell n = {n} is smaller than the outlier count {}",
                        self.contamination.count()
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Theoretical rate expressions evaluated for one `(n, k)` cell. Entries
/// requiring a finite covariance are `None` for heavy-tailed models.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoreticalRates {
    /// Monte Carlo Rademacher complexity of a clean size-`n` sample,
    /// normalized by `1/sqrt(n)` (so it is the complexity term of `r_star`
    /// before the `64/sqrt(n)` factor).
    pub rademacher: MonteCarloEstimate,
    /// Weak variance `sup_{v in S} ||Sigma^{1/2} v||_2`.
    pub weak_variance: Option<f64>,
    /// `max(64/sqrt(n) * rademacher, weak_variance * sqrt(64 k / n))`.
    /// Carries the loose explicit constant 64; treat as an upper-bound
    /// scale, not a sharp prediction.
    pub r_star: Option<f64>,
    /// Gaussian mean width of the covariance-transformed set.
    pub mean_width: Option<MonteCarloEstimate>,
    /// `max(mean_width / sqrt(n), weak_variance * sqrt(log(1/delta) / n))`.
    pub subgaussian: Option<f64>,
    /// `(c0/c1) (sqrt((d+1)/n) + sqrt(log(1/delta)/n)) + |O| / (c1 sqrt(k n))`.
    pub r_diamond: f64,
}

/// Aggregated outcome of one `(n, k)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    /// Sample size.
    pub n: usize,
    /// Block count.
    pub k: usize,
    /// Per-trial errors `||mu_hat - mu*||_S`, sorted ascending.
    pub errors: Vec<f64>,
    /// Median of `errors`.
    pub median_error: f64,
    /// Empirical `1 - delta` quantile of `errors`.
    pub upper_quantile_error: f64,
    /// Median error of the empirical-mean baseline on the same datasets.
    pub baseline_median_error: f64,
    /// `1 - delta` quantile of the baseline errors.
    pub baseline_upper_quantile_error: f64,
    /// Trials whose iterative solver hit its cap without the gap rule.
    pub non_converged: usize,
    /// Theoretical rate expressions for this cell.
    pub theory: TheoreticalRates,
    /// Wall-clock seconds for the cell (excluded from reproducibility
    /// guarantees).
    pub seconds: f64,
}

/// Full experiment report.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Estimator identifier.
    pub estimator: String,
    /// Symmetric-set description.
    pub set: String,
    /// Confidence level from the config.
    pub delta: f64,
    /// Trials per cell.
    pub trials: usize,
    /// Master seed.
    pub seed: u64,
    /// One outcome per `(n, k)` cell, in config order.
    pub cells: Vec<CellOutcome>,
    /// Least-squares slope of `log(median error)` on `log(n)`; present
    /// when at least three distinct `n` values with positive median errors
    /// are available.
    pub slope: Option<f64>,
}

struct TrialOutcome {
    error: f64,
    baseline_error: f64,
    converged: bool,
}

/// Runs the full experiment grid. Deterministic per master seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let location = cfg.inlier.location().clone();
    let mut cells = Vec::with_capacity(cfg.cells.len());
    for (cell_idx, &(n, k)) in cfg.cells.iter().enumerate() {
        let started = Instant::now();
        let trial_stream = 2 * cell_idx as u64;
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<TrialOutcome> {
                let trial_seed = derive_seed2(cfg.seed, trial_stream, trial as u64);
                run_trial(cfg, n, k, &location, trial_seed)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut errors: Vec<f64> = outcomes.iter().map(|o| o.error).collect();
        let mut baseline: Vec<f64> = outcomes.iter().map(|o| o.baseline_error).collect();
        let non_converged = outcomes.iter().filter(|o| !o.converged).count();
        errors.sort_unstable_by(f64::total_cmp);
        baseline.sort_unstable_by(f64::total_cmp);

        let theory = theoretical_rates(cfg, n, k, &location, trial_stream + 1)?;
        cells.push(CellOutcome {
            n,
            k,
            median_error: quantile_from_sorted(&errors, 0.5),
            upper_quantile_error: quantile_from_sorted(&errors, 1.0 - cfg.delta),
            baseline_median_error: quantile_from_sorted(&baseline, 0.5),
            baseline_upper_quantile_error: quantile_from_sorted(&baseline, 1.0 - cfg.delta),
            errors,
            non_converged,
            theory,
            seconds: started.elapsed().as_secs_f64(),
        });
    }

    let rows: Vec<(usize, f64)> = cells.iter().map(|c| (c.n, c.median_error)).collect();
    let slope = fit_rate_slope(&rows).ok();

    Ok(RateReport {
        estimator: cfg.estimator.describe(),
        set: cfg.set.describe(),
        delta: cfg.delta,
        trials: cfg.trials,
        seed: cfg.seed,
        cells,
        slope,
    })
}

fn run_trial(
    cfg: &ExperimentConfig,
    n: usize,
    k: usize,
    location: &DVector<f64>,
    trial_seed: u64,
) -> Result<TrialOutcome> {
    let dataset = generate_dataset(&cfg.inlier, &cfg.contamination, n, trial_seed)?;
    let est_seed = derive_seed(trial_seed, 2);
    let run = cfg.estimator.run(&dataset.data, k, &cfg.set, est_seed)?;
    let (mu_hat, converged) = (run.mu_hat, run.converged);
    let error = cfg.set.norm_s(&(&mu_hat - location))?;
    let baseline_error = cfg
        .set
        .norm_s(&(empirical_mean(&dataset.data)? - location))?;
    Ok(TrialOutcome {
        error,
        baseline_error,
        converged,
    })
}

fn theoretical_rates(
    cfg: &ExperimentConfig,
    n: usize,
    k: usize,
    location: &DVector<f64>,
    theory_stream: u64,
) -> Result<TheoreticalRates> {
    let d = cfg.set.dim();
    let nf = n as f64;
    let u = (1.0 / cfg.delta).ln();

    // Complexity of a clean (uncontaminated) sample in the S-norm.
    let clean = cfg
        .inlier
        .sample_inliers(n, derive_seed2(cfg.seed, theory_stream, 0))?;
    let rademacher = rademacher_complexity(
        &clean,
        location,
        &cfg.set,
        cfg.theory_mc_samples,
        derive_seed2(cfg.seed, theory_stream, 1),
    )?;

    let cov = cfg.inlier.covariance_if_finite()?;
    let (weak_var, mean_width) = match &cov {
        Some(cov) => (
            Some(weak_variance(&cfg.set, cov)?),
            Some(gaussian_mean_width(
                &cfg.set,
                cov,
                cfg.theory_mc_samples,
                derive_seed2(cfg.seed, theory_stream, 2),
            )?),
        ),
        None => (None, None),
    };
    let r_star = weak_var.map(|sigma| {
        (64.0 / nf.sqrt() * rademacher.mean).max(sigma * (64.0 * k as f64 / nf).sqrt())
    });
    let subgaussian = match (&mean_width, weak_var) {
        (Some(w), Some(sigma)) => Some((w.mean / nf.sqrt()).max(sigma * (u / nf).sqrt())),
        _ => None,
    };
    let RateConstants { c0, c1 } = cfg.rate_constants;
    let outliers = cfg.contamination.count() as f64;
    let r_diamond = (c0 / c1) * (((d as f64 + 1.0) / nf).sqrt() + (u / nf).sqrt())
        + outliers / (c1 * (k as f64 * nf).sqrt());

    Ok(TheoreticalRates {
        rademacher,
        weak_variance: weak_var,
        r_star,
        mean_width,
        subgaussian,
        r_diamond,
    })
}

/// Lower empirical quantile of a sorted sample: the value at rank
/// `ceil(level * len)` (1-indexed, clamped). Non-decreasing in `level`.
pub fn quantile_from_sorted(sorted: &[f64], level: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let rank = (level * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Least-squares slope of `log(error)` on `log(n)`.
///
/// Needs at least three distinct `n` values with positive errors; a clean
/// `1/sqrt(n)` decay yields exactly `-0.5`.
pub fn fit_rate_slope(rows: &[(usize, f64)]) -> Result<f64> {
    let mut distinct: Vec<usize> = rows.iter().map(|&(n, _)| n).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "rows",
            reason: format!(
                "slope fitting needs at least 3 distinct sample sizes, got {}",
                distinct.len()
            ),
        });
    }
    if rows
        .iter()
        .any(|&(n, e)| n == 0 || !e.is_finite() || e <= 0.0)
    {
        return Err(Error::InvalidParameter {
            name: "rows",
            reason: "slope fitting needs positive finite errors".into(),
        });
    }
    let m = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|&(_, e)| e.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        num += (x - x_mean) * (y - y_mean);
        den += (x - x_mean) * (x - x_mean);
    }
    Ok(num / den)
}

/// Suggests a block count from the confidence level: the smallest odd
/// divisor of `n` that is at least `ceil(log(1/delta))`, falling back to
/// the largest odd divisor when none is that large.
pub fn suggest_k(delta: f64, n: usize) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("confidence level must lie in (0, 1), got {delta}"),
        });
    }
    if n == 0 {
        return Err(Error::EmptyData {
            context: "suggest_k sample size",
        });
    }
    let target = (1.0 / delta).ln().ceil().max(1.0) as usize;
    let mut best_below = 1usize;
    let mut best_at_or_above: Option<usize> = None;
    let mut j = 1usize;
    while j * j <= n {
        if n.is_multiple_of(j) {
            for div in [j, n / j] {
                if div % 2 == 1 {
                    if div >= target {
                        best_at_or_above =
                            Some(best_at_or_above.map_or(div, |b: usize| b.min(div)));
                    } else {
                        best_below = best_below.max(div);
                    }
                }
            }
        }
        j += 1;
    }
    Ok(best_at_or_above.unwrap_or(best_below))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::CovarianceModel;

    fn tiny_fenchel(which: MomFunction) -> EstimatorChoice {
        EstimatorChoice::FenchelMin {
            which,
            solver: SolverConfig {
                max_outer_iters: 60,
                inner: crate::fenchel::InnerSolverConfig {
                    restarts: 3,
                    max_iters: 60,
                    ..Default::default()
                },
                ..SolverConfig::default()
            },
        }
    }

    #[test]
    fn slope_of_exact_power_laws() {
        let half: Vec<(usize, f64)> = [100, 400, 1600, 6400]
            .iter()
            .map(|&n| (n, 3.0 / (n as f64).sqrt()))
            .collect();
        assert!((fit_rate_slope(&half).unwrap() + 0.5).abs() < 1e-12);
        let flat: Vec<(usize, f64)> = [100, 200, 400].iter().map(|&n| (n, 2.0)).collect();
        assert!(fit_rate_slope(&flat).unwrap().abs() < 1e-12);
        let linear: Vec<(usize, f64)> = [100, 1000, 10000]
            .iter()
            .map(|&n| (n, 5.0 / n as f64))
            .collect();
        assert!((fit_rate_slope(&linear).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_needs_three_distinct_sizes() {
        assert!(fit_rate_slope(&[(100, 1.0), (100, 2.0), (200, 1.5)]).is_err());
        assert!(fit_rate_slope(&[(100, 1.0), (200, 0.0), (400, 1.0)]).is_err());
    }

    #[test]
    fn suggested_block_counts() {
        // log(1/0.05) ~ 3.0: smallest odd divisor of 100 at least 3 is 5.
        assert_eq!(suggest_k(0.05, 100).unwrap(), 5);
        // Powers of two only have the odd divisor 1.
        assert_eq!(suggest_k(0.05, 64).unwrap(), 1);
        // 36 has odd divisors 1, 3, 9: target 3 picks 3.
        assert_eq!(suggest_k(0.05, 36).unwrap(), 3);
        // Very small delta pushes the target up to 21: for 100 that is 25.
        assert_eq!(suggest_k(1e-9, 100).unwrap(), 25);
        // Target larger than any odd divisor: fall back to the largest.
        assert_eq!(suggest_k(1e-9, 50).unwrap(), 25);
        assert!(suggest_k(1.5, 100).is_err());
    }

    #[test]
    fn quantiles_are_monotone_in_level() {
        let sorted = [0.5, 1.0, 2.0, 3.5, 10.0];
        let mut last = f64::NEG_INFINITY;
        for level in [0.05, 0.25, 0.5, 0.75, 0.95, 1.0] {
            let q = quantile_from_sorted(&sorted, level);
            assert!(q >= last);
            last = q;
        }
        assert_eq!(quantile_from_sorted(&sorted, 0.5), 2.0);
        assert_eq!(quantile_from_sorted(&sorted, 1.0), 10.0);
    }

    #[test]
    fn zero_covariance_data_gives_zero_errors() {
        let d = 2;
        let cfg = ExperimentConfig {
            trials: 10,
            ..ExperimentConfig::new(
                EstimatorChoice::CoordinatewiseMom,
                InlierModel::Gaussian {
                    location: DVector::from_vec(vec![1.0, -1.0]),
                    cov: CovarianceModel::diagonal(DVector::zeros(d)).unwrap(),
                },
                ContaminationStrategy::None,
                SymmetricSet::euclidean_ball(d, 1.0).unwrap(),
                vec![(20, 1), (40, 5)],
            )
        };
        let report = run_experiment(&cfg).unwrap();
        for cell in &report.cells {
            assert!(cell.errors.iter().all(|&e| e == 0.0));
            assert_eq!(cell.median_error, 0.0);
            assert_eq!(cell.baseline_median_error, 0.0);
            assert_eq!(cell.theory.weak_variance, Some(0.0));
            assert_eq!(cell.theory.r_star, Some(0.0));
        }
    }

    #[test]
    fn reports_are_reproducible_modulo_wall_clock() {
        let cfg = ExperimentConfig {
            trials: 8,
            seed: 42,
            theory_mc_samples: 50,
            ..ExperimentConfig::new(
                tiny_fenchel(MomFunction::Median),
                InlierModel::Gaussian {
                    location: DVector::zeros(2),
                    cov: CovarianceModel::identity(2).unwrap(),
                },
                ContaminationStrategy::None,
                SymmetricSet::euclidean_ball(2, 1.0).unwrap(),
                vec![(30, 3)],
            )
        };
        let mut a = run_experiment(&cfg).unwrap();
        let mut b = run_experiment(&cfg).unwrap();
        for c in a.cells.iter_mut().chain(b.cells.iter_mut()) {
            c.seconds = 0.0;
        }
        assert_eq!(a, b);
    }

    #[test]
    fn upper_quantile_never_below_median_on_gaussian_cells() {
        let cfg = ExperimentConfig {
            trials: 20,
            seed: 7,
            theory_mc_samples: 50,
            ..ExperimentConfig::new(
                EstimatorChoice::CoordinatewiseMom,
                InlierModel::Gaussian {
                    location: DVector::zeros(2),
                    cov: CovarianceModel::identity(2).unwrap(),
                },
                ContaminationStrategy::None,
                SymmetricSet::canonical_cross(2).unwrap(),
                vec![(60, 5), (120, 5)],
            )
        };
        let report = run_experiment(&cfg).unwrap();
        for cell in &report.cells {
            assert!(cell.upper_quantile_error >= cell.median_error);
            assert!(cell.baseline_upper_quantile_error >= cell.baseline_median_error);
            assert!(cell.theory.subgaussian.unwrap() > 0.0);
            assert!(cell.theory.r_diamond > 0.0);
        }
    }

    #[test]
    fn contaminated_baseline_underperforms_robust_estimator() {
        let cfg = ExperimentConfig {
            trials: 10,
            seed: 3,
            theory_mc_samples: 50,
            ..ExperimentConfig::new(
                EstimatorChoice::CoordinatewiseMom,
                InlierModel::Gaussian {
                    location: DVector::zeros(2),
                    cov: CovarianceModel::identity(2).unwrap(),
                },
                ContaminationStrategy::FarPoint {
                    count: 2,
                    magnitude: 1e6,
                    direction: crate::datagen::OutlierDirection::RandomUnit,
                },
                SymmetricSet::euclidean_ball(2, 1.0).unwrap(),
                vec![(60, 15)],
            )
        };
        let report = run_experiment(&cfg).unwrap();
        let cell = &report.cells[0];
        assert!(
            cell.baseline_median_error > 100.0 * cell.median_error,
            "baseline {} vs robust {}",
            cell.baseline_median_error,
            cell.median_error
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = ExperimentConfig::new(
            EstimatorChoice::EmpiricalMean,
            InlierModel::Gaussian {
                location: DVector::zeros(2),
                cov: CovarianceModel::identity(2).unwrap(),
            },
            ContaminationStrategy::None,
            SymmetricSet::euclidean_ball(2, 1.0).unwrap(),
            vec![(30, 3)],
        );
        let bad_cell = ExperimentConfig {
            cells: vec![(30, 4)],
            ..base.clone()
        };
        assert!(run_experiment(&bad_cell).is_err());
        let bad_delta = ExperimentConfig {
            delta: 0.0,
            ..base.clone()
        };
        assert!(run_experiment(&bad_delta).is_err());
        let bad_trials = ExperimentConfig { trials: 0, ..base };
        assert!(run_experiment(&bad_trials).is_err());
    }
}
