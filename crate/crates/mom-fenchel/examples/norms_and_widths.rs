//! Tour of symmetric sets: the support-function norm they induce, the
//! direction attaining it, and the three complexity measures that govern
//! estimation rates (Gaussian mean width, weak variance, Rademacher
//! complexity).
//!
//! Run with `cargo run --example norms_and_widths`.

use nalgebra::{DMatrix, DVector};

use mom_fenchel::set::rademacher_complexity;
use mom_fenchel::verify::expected_gaussian_norm;
use mom_fenchel::{gaussian_mean_width, weak_variance, CovarianceModel, Result, SymmetricSet};

fn main() -> Result<()> {
    // Three flavors of symmetric set in the plane.
    let cross = SymmetricSet::canonical_cross(2)?;
    let ball = SymmetricSet::euclidean_ball(2, 1.0)?;
    let slab = SymmetricSet::finite_points(vec![DVector::from_vec(vec![1.0, 0.5])])?;

    let x = DVector::from_vec(vec![3.0, -4.0]);
    println!("norms of x = (3, -4):");
    for set in [&cross, &ball, &slab] {
        let norm = set.norm_s(&x)?;
        let direction = set.support_argmax(&x)?;
        println!(
            "  {:<22} ||x||_S = {:>7.4}   attained at v = ({:+.3}, {:+.3})",
            set.describe(),
            norm,
            direction[0],
            direction[1]
        );
    }
    println!("(the cross gives the sup norm, the unit ball the Euclidean norm,");
    println!(" and a single stored point a rank-one seminorm |<x, p>|)\n");

    // Gaussian mean width: Monte Carlo vs the exact chi moment for balls.
    let cov = CovarianceModel::identity(2)?;
    for d in [2usize, 10] {
        let ball_d = SymmetricSet::euclidean_ball(d, 1.0)?;
        let est = gaussian_mean_width(&ball_d, &CovarianceModel::identity(d)?, 200_000, 7)?;
        println!(
            "mean width of the unit ball in dimension {d}: {:.4} +- {:.4} (exact {:.4})",
            est.mean,
            est.std_error,
            expected_gaussian_norm(d)
        );
    }

    // Weak variance: the largest one-dimensional variance seen by S.
    let stretched = CovarianceModel::diagonal(DVector::from_vec(vec![4.0, 0.25]))?;
    println!(
        "\nweak variance under cov = diag(4, 1/4): cross {:.3}, ball {:.3}",
        weak_variance(&cross, &stretched)?,
        weak_variance(&ball, &stretched)?
    );
    println!(
        "weak variance under the identity:       cross {:.3}, ball {:.3}",
        weak_variance(&cross, &cov)?,
        weak_variance(&ball, &cov)?
    );

    // Rademacher complexity of a centered sample: the data-driven
    // counterpart of the mean width.
    let n = 400;
    let data = {
        use rand::prelude::*;
        use rand_distr::StandardNormal;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        DMatrix::from_fn(n, 2, |_, _| rng.sample::<f64, _>(StandardNormal))
    };
    let center = DVector::zeros(2);
    let rad = rademacher_complexity(&data, &center, &ball, 400, 13)?;
    println!(
        "\nRademacher complexity of {n} standard normals on the unit ball: {:.4} +- {:.4}",
        rad.mean, rad.std_error
    );
    println!("(the sign-weighted sum is again nearly standard normal, so this sits",);
    println!(
        " near the expected Gaussian norm {:.4})",
        expected_gaussian_norm(2)
    );
    Ok(())
}
