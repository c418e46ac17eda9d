//! Fenchel-Legendre conjugates of the block statistics over a symmetric
//! set: exact enumeration on finite sets, restarted sphere ascent on
//! balls, and the squared regularized variant used by the alternating
//! solver.
//!
//! Run with `cargo run --example conjugates`.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_distr::StandardNormal;

use mom_fenchel::fenchel::{InnerSolverConfig, ObjectiveContext};
use mom_fenchel::mom::{bucketed_means, make_partition, MomFunction};
use mom_fenchel::{Result, SymmetricSet};

fn main() -> Result<()> {
    let (n, k, d) = (90, 9, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let data = DMatrix::from_fn(n, d, |_, j| {
        [2.0, -1.0][j] + rng.sample::<f64, _>(StandardNormal)
    });
    let partition = make_partition(n, k, 5)?;
    let means = bucketed_means(&data, &partition)?;

    let cross = SymmetricSet::canonical_cross(d)?;
    let ball = SymmetricSet::euclidean_ball(d, 1.0)?;

    // h*_S(mu) = sup_{v in S} (<mu, v> - h(v)) is a convex function of mu
    // that is small exactly where mu looks like "the center" to every
    // direction in S.
    let ctx_cross = ObjectiveContext::new(
        &means,
        &cross,
        MomFunction::Median,
        InnerSolverConfig::default(),
    )?;
    let ctx_ball = ObjectiveContext::new(
        &means,
        &ball,
        MomFunction::Median,
        InnerSolverConfig::default(),
    )?;

    println!("g-conjugate along the segment from (0,0) to the true center (2,-1):");
    println!("{:>6}  {:>12}  {:>12}", "t", "cross", "ball");
    for step in 0..=6 {
        let t = step as f64 / 6.0;
        let mu = DVector::from_vec(vec![2.0 * t, -t]);
        let on_cross = ctx_cross.eval_conjugate(&mu)?;
        let on_ball = ctx_ball.eval_conjugate(&mu)?;
        println!(
            "{t:>6.2}  {:>12.5}  {:>12.5}",
            on_cross.value, on_ball.value
        );
    }
    println!("(both decrease toward the center; the cross evaluates by exact");
    println!(" enumeration, the ball by restarted projected ascent on the circle)\n");

    // The maximizer is a certificate: plugging it back reproduces the value.
    let mu = DVector::from_vec(vec![0.5, 0.5]);
    let result = ctx_ball.eval_conjugate(&mu)?;
    let v = &result.maximizer;
    let h = MomFunction::Median.evaluate(v, &means)?;
    println!(
        "at mu = (0.5, 0.5): value {:.6}, witness v = ({:+.4}, {:+.4}), certified = {}",
        result.value, v[0], v[1], result.certified
    );
    println!(
        "replaying the witness: <mu,v> - g(v) = {:.6}\n",
        mu.dot(v) - h
    );

    // The regularized conjugate squares a clipped, norm-scaled supremum;
    // it vanishes on a neighborhood of the center instead of at one point.
    println!("regularized g-conjugate (ball) along the same segment:");
    for step in 0..=6 {
        let t = step as f64 / 6.0;
        let mu = DVector::from_vec(vec![2.0 * t, -t]);
        let reg = ctx_ball.eval_regularized_conjugate(&mu)?;
        println!("  t = {t:.2}: {:.6}", reg.value);
    }

    // Warm starts reuse the previous maximizer as one ascent start; on a
    // slowly moving mu they keep the inner problem cheap.
    let mut warm = None;
    let mut mu = DVector::from_vec(vec![0.0, 0.0]);
    for _ in 0..3 {
        let r = ctx_ball.eval_conjugate_warm(&mu, warm.as_ref())?;
        warm = Some(r.maximizer);
        mu += DVector::from_vec(vec![0.4, -0.2]);
    }
    println!("\nwarm-started evaluations along a moving mu finished consistently");
    Ok(())
}
