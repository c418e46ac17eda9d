//! Acceptance gate: eleven numbered end-to-end checks, each printing one
//! PASS/FAIL line (visible via `cargo test --test acceptance -- --nocapture`)
//! and asserting, so the suite fails loudly if any criterion regresses.
//!
//! Every check fixes its seeds, so reruns are bit-for-bit reproducible.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use mom_fenchel::bench::run_experiment;
use mom_fenchel::bench::{fit_rate_slope, EstimatorChoice, ExperimentConfig, RateReport};
use mom_fenchel::datagen::{
    estimate_tail_h, generate_dataset, ContaminationStrategy, InlierModel, OutlierDirection,
};
use mom_fenchel::derive_seed;
use mom_fenchel::estimators::minmax_mom_objective;
use mom_fenchel::estimators::SolverConfig;
use mom_fenchel::estimators::{coordinatewise_mom, robust_data_scale, solve_fenchel_min};
use mom_fenchel::fenchel::{InnerSolverConfig, ObjectiveContext};
use mom_fenchel::mom::{bucketed_means, make_partition, BucketedMeans, MomFunction};
use mom_fenchel::set::CovarianceModel;
use mom_fenchel::verify::{exact_odd_median, expected_gaussian_norm};
use mom_fenchel::{gaussian_mean_width, SymmetricSet};

/// Prints the criterion's line and enforces it.
fn report(number: usize, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {number:2}] {status}  {name}: {detail}");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn randn(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(d, |_, _| scale * randn(rng))
}

/// A random symmetric finite set of 2..=6 stored points (negations added
/// by the constructor).
fn random_finite_set(rng: &mut ChaCha8Rng, d: usize) -> SymmetricSet {
    let count = rng.random_range(2..=6);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let scale = rng.random_range(0.3..2.0);
        points.push(random_vector(rng, d, scale));
    }
    SymmetricSet::finite_points(points).expect("nonempty point set")
}

/// A random data matrix with occasional large rows, so the checked
/// identities see a spread of scales.
fn random_data(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DMatrix<f64> {
    let base = rng.random_range(0.5..3.0);
    let mut data = DMatrix::from_fn(n, d, |_, _| base * randn(rng));
    for i in 0..n {
        if rng.random::<f64>() < 0.1 {
            for j in 0..d {
                data[(i, j)] *= 100.0;
            }
        }
    }
    data
}

fn random_means(rng: &mut ChaCha8Rng, n: usize, k: usize, d: usize) -> BucketedMeans {
    let data = random_data(rng, n, d);
    let partition = make_partition(n, k, rng.random()).unwrap();
    bucketed_means(&data, &partition).unwrap()
}

/// Solver settings light enough for hundreds of Monte Carlo trials; the
/// coordinate-wise start is already consistent, descent only refines it.
fn light_solver(max_outer: usize) -> SolverConfig {
    SolverConfig {
        max_outer_iters: max_outer,
        inner: InnerSolverConfig {
            restarts: 3,
            max_iters: 60,
            ..InnerSolverConfig::default()
        },
        ..SolverConfig::default()
    }
}

fn gaussian_ball_experiment(cells: Vec<(usize, usize)>, seed: u64) -> ExperimentConfig {
    let d = 10;
    let mut cfg = ExperimentConfig::new(
        EstimatorChoice::FenchelMin {
            which: MomFunction::Median,
            solver: light_solver(60),
        },
        InlierModel::Gaussian {
            location: DVector::zeros(d),
            cov: CovarianceModel::identity(d).unwrap(),
        },
        ContaminationStrategy::None,
        SymmetricSet::euclidean_ball(d, 1.0).unwrap(),
        cells,
    );
    cfg.seed = seed;
    cfg.theory_mc_samples = 16;
    cfg
}

fn single_cell(report: &RateReport) -> &mom_fenchel::bench::CellOutcome {
    assert_eq!(report.cells.len(), 1);
    &report.cells[0]
}

/// Criterion 1: for any dataset, query point `mu`, and anchor `b`, the
/// conjugate of an odd block statistic is sandwiched between
/// `||mu - b||_S -/+ conjugate(b)`. 1000 random cases, both statistics.
#[test]
fn acceptance_01_sandwich_inequality() {
    let mut rng = rng(101);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for _ in 0..1000 {
        let d = rng.random_range(1..=5);
        let k = *[3usize, 5, 7].choose(&mut rng).unwrap();
        let n = k * rng.random_range(2..=(200 / k));
        let set = random_finite_set(&mut rng, d);
        let means = random_means(&mut rng, n, k, d);
        let mu = random_vector(&mut rng, d, 4.0);
        let b = random_vector(&mut rng, d, 4.0);
        let dist = set.norm_s(&(&mu - &b)).unwrap();
        for which in [MomFunction::Median, MomFunction::InterquartileAverage] {
            let ctx =
                ObjectiveContext::new(&means, &set, which, InnerSolverConfig::default()).unwrap();
            let at_mu = ctx.eval_conjugate(&mu).unwrap().value;
            let at_b = ctx.eval_conjugate(&b).unwrap().value;
            let scale = 1.0 + dist + at_b.abs();
            let excess = (at_mu - dist).abs() - at_b;
            worst = worst.max(excess / scale);
            if excess > 1e-9 * scale {
                pass = false;
            }
        }
    }
    report(
        1,
        "sandwich inequality",
        pass,
        &format!("1000 cases x (g, f); worst relative excess {worst:.3e} (allowed 1e-9)"),
    );
}

/// Criterion 2: conjugates are convex: 10^4 random midpoint triples on
/// finite sets, checked with exact enumeration at 1e-12 relative slack.
#[test]
fn acceptance_02_conjugate_convexity() {
    let mut rng = rng(102);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for i in 0..10_000 {
        let d = rng.random_range(1..=4);
        let set = random_finite_set(&mut rng, d);
        let means = random_means(&mut rng, 30, 5, d);
        let which = if i % 2 == 0 {
            MomFunction::Median
        } else {
            MomFunction::InterquartileAverage
        };
        let ctx = ObjectiveContext::new(&means, &set, which, InnerSolverConfig::default()).unwrap();
        let a = random_vector(&mut rng, d, 5.0);
        let c = random_vector(&mut rng, d, 5.0);
        let mid = (&a + &c) * 0.5;
        let fa = ctx.eval_conjugate(&a).unwrap().value;
        let fc = ctx.eval_conjugate(&c).unwrap().value;
        let fm = ctx.eval_conjugate(&mid).unwrap().value;
        let rhs = 0.5 * (fa + fc);
        let scale = 1.0 + fm.abs() + rhs.abs();
        let violation = (fm - rhs) / scale;
        worst = worst.max(violation);
        if violation > 1e-12 {
            pass = false;
        }
    }
    report(
        2,
        "conjugate convexity",
        pass,
        &format!("10000 midpoint triples; worst relative violation {worst:.3e} (allowed 1e-12)"),
    );
}

/// Criterion 3: on the canonical cross the g-conjugate minimizer is the
/// coordinate-wise median-of-means; the solver must reproduce it.
#[test]
fn acceptance_03_cross_matches_coordinatewise() {
    let mut rng = rng(103);
    let (n, k, d) = (200, 5, 5);
    let set = SymmetricSet::canonical_cross(d).unwrap();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for instance in 0..50 {
        let location = random_vector(&mut rng, d, 5.0);
        let spread = rng.random_range(0.3..3.0);
        let mut data = DMatrix::from_fn(n, d, |_, j| location[j] + spread * randn(&mut rng));
        // A few gross outliers keep the comparison honest.
        for _ in 0..3 {
            let i = rng.random_range(0..n);
            for j in 0..d {
                data[(i, j)] += 1e4 * randn(&mut rng);
            }
        }
        let seed = 4000 + instance;
        let config = SolverConfig {
            seed,
            ..SolverConfig::default()
        };
        let result = solve_fenchel_min(&data, k, &set, MomFunction::Median, &config).unwrap();
        let partition = make_partition(n, k, derive_seed(seed, 0)).unwrap();
        let cw = coordinatewise_mom(&data, &partition).unwrap();
        let means = bucketed_means(&data, &partition).unwrap();
        let scale = 1.0 + robust_data_scale(&means, &cw).unwrap();
        let gap = (&result.mu_hat - &cw).amax();
        worst = worst.max(gap / scale);
        if gap > 1e-3 * scale {
            pass = false;
        }
    }
    report(
        3,
        "closed-form cross solve",
        pass,
        &format!("50 instances (N=200, K=5); worst scaled sup-gap {worst:.3e} (allowed 1e-3)"),
    );
}

/// Criterion 4: the best minmax objective over ray-optimal opponents
/// equals the squared clipped supremum of the median projection.
#[test]
fn acceptance_04_minmax_equivalence() {
    let mut rng = rng(104);
    let (n, k, d) = (60, 5, 2);
    let n_dirs = 10_000;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for _ in 0..20 {
        let location = random_vector(&mut rng, d, 2.0);
        let data = DMatrix::from_fn(n, d, |_, j| location[j] + randn(&mut rng));
        let partition = make_partition(n, k, rng.random()).unwrap();
        let means = bucketed_means(&data, &partition).unwrap();
        let mu = &location + random_vector(&mut rng, d, 0.5);
        let diffs: Vec<DVector<f64>> = (0..k).map(|b| means.block_mean(b) - &mu).collect();

        let mut best_obj = f64::NEG_INFINITY;
        let mut best_med = f64::NEG_INFINITY;
        for i in 0..n_dirs {
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / (n_dirs as f64);
            let v = DVector::from_vec(vec![angle.cos(), angle.sin()]);
            let projections: Vec<f64> = diffs.iter().map(|diff| diff.dot(&v)).collect();
            let m = exact_odd_median(&projections);
            best_med = best_med.max(m);
            // Along nu = mu + t v the objective is 2 t m - t^2, maximized
            // at t = max(0, m).
            let t = m.max(0.0);
            let nu = &mu + &v * t;
            let value = minmax_mom_objective(&mu, &nu, &means).unwrap();
            best_obj = best_obj.max(value);
        }
        let closed_form = best_med.max(0.0).powi(2);
        let gap = (best_obj - closed_form).abs();
        worst = worst.max(gap);
        if gap > 1e-6 {
            pass = false;
        }
    }
    report(
        4,
        "minmax objective identity",
        pass,
        &format!("20 instances x 10000 directions; worst gap {worst:.3e} (allowed 1e-6)"),
    );
}

/// Criterion 5: on clean isotropic Gaussian data in dimension 10 the
/// solver's Euclidean error concentrates at the sqrt(d/N) scale.
/// (N = 1015 = 35 x 29 keeps the odd block count dividing N; the bounds
/// are the frozen values 4 sqrt(d/1000) and 6 sqrt(d/1000).)
#[test]
fn acceptance_05_subgaussian_error_scale() {
    let mut cfg = gaussian_ball_experiment(vec![(1015, 29)], 105);
    cfg.trials = 200;
    cfg.delta = 0.05;
    let report_out = run_experiment(&cfg).unwrap();
    let cell = single_cell(&report_out);
    let pass = cell.median_error <= 0.4 && cell.upper_quantile_error <= 0.6;
    report(
        5,
        "subgaussian error scale",
        pass,
        &format!(
            "200 trials (N=1015, K=29, dim 10): median {:.4} (allowed 0.4), 95th pct {:.4} (allowed 0.6)",
            cell.median_error, cell.upper_quantile_error
        ),
    );
}

/// Criterion 6: the median error shrinks like N^(-1/2): fitted log-log
/// slope within [-0.65, -0.35] over N in {250, 1000, 4000}.
#[test]
fn acceptance_06_rate_slope() {
    let mut cfg = gaussian_ball_experiment(vec![(250, 25), (1000, 25), (4000, 25)], 106);
    cfg.trials = 50;
    let report_out = run_experiment(&cfg).unwrap();
    let slope = report_out.slope.expect("three cells fitted");
    let check = fit_rate_slope(
        &report_out
            .cells
            .iter()
            .map(|c| (c.n, c.median_error))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    assert!(
        (slope - check).abs() < 1e-12,
        "report slope disagrees with direct fit"
    );
    let pass = (-0.65..=-0.35).contains(&slope);
    report(
        6,
        "error rate slope",
        pass,
        &format!(
            "N in {{250, 1000, 4000}}, 50 trials each: slope {slope:.4} (allowed [-0.65, -0.35])"
        ),
    );
}

/// Criterion 7: ten far outliers at magnitude 10^6 barely move the
/// block-median estimator but wreck the empirical mean.
#[test]
fn acceptance_07_adversarial_robustness() {
    let cells = vec![(1026, 171)];
    let mut clean = gaussian_ball_experiment(cells.clone(), 107);
    clean.trials = 100;
    let mut cfg = gaussian_ball_experiment(cells, 107);
    cfg.trials = 100;
    cfg.contamination = ContaminationStrategy::FarPoint {
        count: 10,
        magnitude: 1e6,
        direction: OutlierDirection::RandomUnit,
    };
    let clean_report = run_experiment(&clean).unwrap();
    let dirty_report = run_experiment(&cfg).unwrap();
    let clean_median = single_cell(&clean_report).median_error;
    let dirty = single_cell(&dirty_report);
    let stable = dirty.median_error <= 3.0 * clean_median;
    let baseline_wrecked = dirty.baseline_median_error >= 100.0 * dirty.median_error;
    report(
        7,
        "adversarial robustness",
        stable && baseline_wrecked,
        &format!(
            "100 trials (N=1026, K=171, 10 outliers at 1e6): contaminated median {:.4} vs clean {:.4} (allowed 3x); empirical-mean median {:.1} ({:.0}x ours, needs >= 100x)",
            dirty.median_error,
            clean_median,
            dirty.baseline_median_error,
            dirty.baseline_median_error / dirty.median_error
        ),
    );
}

/// Criterion 8: with no first moment (coordinate-wise Cauchy) and 100
/// outliers, the coordinate-wise median still localizes at the
/// sqrt((d+1)/N) + |O|/N scale. N = 2001 keeps the block count (= N) odd.
#[test]
fn acceptance_08_cauchy_coordinatewise_median() {
    let d = 10;
    let n = 2001;
    let outliers = 100;
    let trials: usize = 200;
    let location = DVector::from_fn(d, |i, _| 0.3 * (i as f64) - 1.0);
    let model = InlierModel::CoordCauchy {
        location: location.clone(),
        scales: DVector::from_element(d, 1.0),
    };
    let strategy = ContaminationStrategy::FarPoint {
        count: outliers,
        magnitude: 1e6,
        direction: OutlierDirection::RandomUnit,
    };
    let bound = 5.0 * ((((d + 1) as f64) / (n as f64)).sqrt() + (outliers as f64) / (n as f64));
    let hits: usize = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(108, trial as u64);
            let dataset = generate_dataset(&model, &strategy, n, seed).unwrap();
            let partition = make_partition(n, n, derive_seed(seed, 1)).unwrap();
            let estimate = coordinatewise_mom(&dataset.data, &partition).unwrap();
            usize::from((&estimate - &location).amax() <= bound)
        })
        .sum();
    let pass = hits * 100 >= trials * 95;
    report(
        8,
        "heavy-tail coordinatewise median",
        pass,
        &format!("{hits}/{trials} trials within sup-norm bound {bound:.4} (needs >= 95%)"),
    );
}

/// Criterion 9: the single-sample Cauchy tail function stays below the
/// linearized bound 1/2 - r/(2 pi) at r in {0.25, 0.5, 1.0}.
#[test]
fn acceptance_09_cauchy_tail_bound() {
    let model = InlierModel::CoordCauchy {
        location: DVector::zeros(1),
        scales: DVector::from_element(1, 1.0),
    };
    let v = DVector::from_element(1, 1.0);
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, r) in [0.25, 0.5, 1.0].into_iter().enumerate() {
        let est = estimate_tail_h(&model, 1000, 1000, &v, r, 100_000, 109 + i as u64).unwrap();
        let bound = 0.5 - r / (2.0 * std::f64::consts::PI) + 3.0 * est.std_error;
        if est.mean > bound {
            pass = false;
        }
        parts.push(format!("H({r}) = {:.4} <= {:.4}", est.mean, bound));
    }
    report(9, "Cauchy tail bound", pass, &parts.join("; "));
}

/// Criterion 10: the Monte Carlo Gaussian mean width of the unit ball
/// matches the exact moment of the chi distribution within 3 standard
/// errors at one million samples.
#[test]
fn acceptance_10_gaussian_width_oracle() {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [1usize, 2, 10] {
        let set = SymmetricSet::euclidean_ball(d, 1.0).unwrap();
        let cov = CovarianceModel::identity(d).unwrap();
        let est = gaussian_mean_width(&set, &cov, 1_000_000, 1000 + d as u64).unwrap();
        let exact = expected_gaussian_norm(d);
        let gap = (est.mean - exact).abs();
        if gap > 3.0 * est.std_error {
            pass = false;
        }
        parts.push(format!(
            "d={d}: {:.5} vs {:.5} ({:.2} se)",
            est.mean,
            exact,
            gap / est.std_error
        ));
    }
    report(10, "Gaussian mean width oracle", pass, &parts.join("; "));
}

/// Criterion 11: positive homogeneity and oddness of both block
/// statistics, and the seminorm axioms, on 10^4 random cases each at
/// 1e-12 relative tolerance.
#[test]
fn acceptance_11_invariant_suites() {
    let mut rng = rng(111);
    // `worst` is the largest ratio of an observed gap to its 1e-12-relative
    // allowance, so any value above 1 is a violation.
    let mut worst: f64 = 0.0;
    let mut pass = true;

    // Positive homogeneity and oddness of both block statistics. The
    // relative tolerance is measured against the magnitude the evaluation
    // works at — the largest block projection — since the returned
    // statistic can sit far below it without any loss of precision.
    for _ in 0..10_000 {
        let d = rng.random_range(1..=4);
        let k = *[1usize, 3, 5, 7, 9].choose(&mut rng).unwrap();
        let means =
            BucketedMeans::from_means(DMatrix::from_fn(k, d, |_, _| randn(&mut rng))).unwrap();
        let v = random_vector(&mut rng, d, 1.0);
        let theta = rng.random_range(1e-3..1e3);
        let proj_scale = means
            .projections(&v)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, p| m.max(p.abs()));
        for which in [MomFunction::Median, MomFunction::InterquartileAverage] {
            let base = which.evaluate(&v, &means).unwrap();
            let scaled = which.evaluate(&(&v * theta), &means).unwrap();
            let flipped = which.evaluate(&(-&v), &means).unwrap();
            let homo_allow = 1e-12 * (theta * proj_scale).max(1e-12);
            let odd_allow = 1e-12 * proj_scale.max(1e-12);
            let homo = (scaled - theta * base).abs();
            let odd = (flipped + base).abs();
            worst = worst.max(homo / homo_allow).max(odd / odd_allow);
            if homo > homo_allow || odd > odd_allow {
                pass = false;
            }
        }
    }

    // Seminorm axioms of the support-function norm.
    for case in 0..10_000 {
        let d = rng.random_range(1..=4);
        let set = match case % 3 {
            0 => SymmetricSet::canonical_cross(d).unwrap(),
            1 => SymmetricSet::euclidean_ball(d, rng.random_range(0.1..10.0)).unwrap(),
            _ => random_finite_set(&mut rng, d),
        };
        let x = random_vector(&mut rng, d, 1.0);
        let y = random_vector(&mut rng, d, 1.0);
        let alpha: f64 = randn(&mut rng);
        let nx = set.norm_s(&x).unwrap();
        let ny = set.norm_s(&y).unwrap();
        let scale = nx.max(ny).max(1.0);
        let triangle = set.norm_s(&(&x + &y)).unwrap() - (nx + ny);
        let homo = (set.norm_s(&(&x * alpha)).unwrap() - alpha.abs() * nx).abs();
        let sym = (set.norm_s(&(-&x)).unwrap() - nx).abs();
        let homo_allow = 1e-12 * scale.max(alpha.abs() * scale);
        let allow = 1e-12 * scale;
        worst = worst
            .max(triangle / allow)
            .max(homo / homo_allow)
            .max(sym / allow);
        if nx < 0.0 || ny < 0.0 || triangle > allow || homo > homo_allow || sym > allow {
            pass = false;
        }
    }

    report(
        11,
        "homogeneity, oddness, seminorm axioms",
        pass,
        &format!(
            "2 x 10000 cases at 1e-12 relative tolerance; worst gap/allowance ratio {worst:.3}"
        ),
    );
}
