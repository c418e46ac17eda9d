//! The median-of-means machinery: random equipartitions, per-block means,
//! and the two directional statistics built from them — the block median
//! `g` and the inter-quartile average `f` — with their subgradients.
//!
//! Run with `cargo run --example block_medians`.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_distr::StandardNormal;

use mom_fenchel::mom::{
    active_interquartile_blocks, bucketed_means, g_median_block, interquartile_ranks,
    make_partition, MomFunction,
};
use mom_fenchel::Result;

fn main() -> Result<()> {
    let (n, k, d) = (60, 5, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);

    // A Gaussian cloud around (1, -1) with three wild rows mixed in.
    let mut data = DMatrix::from_fn(n, d, |_, j| {
        [1.0, -1.0][j] + rng.sample::<f64, _>(StandardNormal)
    });
    for i in [7usize, 23, 41] {
        data[(i, 0)] += 500.0;
        data[(i, 1)] -= 500.0;
    }

    let partition = make_partition(n, k, 99)?;
    println!(
        "partition: {} samples into {} blocks of {}",
        partition.n(),
        partition.block_count(),
        partition.block_size()
    );

    let means = bucketed_means(&data, &partition)?;
    println!("\nblock means (rows of the K x d bucket matrix):");
    for b in 0..means.block_count() {
        let m = means.block_mean(b);
        println!("  block {b}: ({:+9.3}, {:+9.3})", m[0], m[1]);
    }
    println!("(blocks hit by a wild row are visibly dragged away)");

    // Project onto a direction and read off both statistics.
    let v = DVector::from_vec(vec![1.0, 0.0]);
    let projections = means.projections(&v)?;
    println!("\nprojections onto v = e1: {projections:.3?}");

    let g = MomFunction::Median.evaluate(&v, &means)?;
    let f = MomFunction::InterquartileAverage.evaluate(&v, &means)?;
    let (lo, hi) = interquartile_ranks(k);
    println!("g(v) = median of projections            = {g:+.4}");
    println!("f(v) = average of sorted ranks {lo}..={hi}     = {f:+.4}");
    println!(
        "(the plain mean of projections would report {:+.4};",
        projections.iter().sum::<f64>() / k as f64
    );
    println!(" the median shrugs off both dragged blocks, while f's middle-half");
    println!(" window still brushes one of them — f tolerates roughly K/4");
    println!(" corrupted blocks against the median's K/2)");

    // Subgradients: which blocks carry the statistic.
    let (_, median_block) = g_median_block(&v, &means)?;
    let active = active_interquartile_blocks(&v, &means)?;
    println!("\nthe median is carried by block {median_block}; f averages blocks {active:?}");

    let (g_val, g_sub) = MomFunction::Median.value_and_subgradient(&v, &means)?;
    let (f_val, f_sub) = MomFunction::InterquartileAverage.value_and_subgradient(&v, &means)?;
    println!(
        "subgradient of g at v: ({:+.3}, {:+.3})  [the median block's mean, value {:+.4}]",
        g_sub[0], g_sub[1], g_val
    );
    println!(
        "subgradient of f at v: ({:+.3}, {:+.3})  [the active blocks' average, value {:+.4}]",
        f_sub[0], f_sub[1], f_val
    );

    // Both statistics are odd and positively homogeneous.
    let minus = MomFunction::Median.evaluate(&(-&v), &means)?;
    let double = MomFunction::Median.evaluate(&(&v * 2.0), &means)?;
    println!("\ng(-v) = {minus:+.4} = -g(v); g(2v) = {double:+.4} = 2 g(v)");
    Ok(())
}
