//! Brute-force reference computations for low-dimensional cross-checks.
//!
//! Everything here is exhaustive (dense grids, full enumeration) or
//! per-sample direct. Review rule for this module: it must not call into
//! [`crate::fenchel`] or [`crate::estimators`], and it re-implements its own
//! order statistics instead of using [`crate::mom`]'s, so that agreement
//! between an oracle and a production path is evidence rather than
//! tautology. Shared *types* (sets, partitions, block means) are fine;
//! shared computation is not.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mom::{BlockPartition, BucketedMeans, MomFunction};
use crate::set::SymmetricSet;

/// Default number of points per axis for box grids.
pub const DEFAULT_POINTS_PER_AXIS: usize = 401;

/// Default number of directions for angular grids.
pub const DEFAULT_ANGULAR_DIRECTIONS: usize = 10_000;

/// Search grid description for the brute-force oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// Dense axis-aligned box grid (for argmin searches, `d <= 2`).
    Box {
        /// Per-coordinate lower corner.
        lows: Vec<f64>,
        /// Per-coordinate upper corner.
        highs: Vec<f64>,
        /// Grid points per axis (>= 2).
        points_per_axis: usize,
    },
    /// Evenly spaced unit directions on the circle (`d = 2`).
    Angular {
        /// Number of directions (>= 4).
        directions: usize,
    },
}

impl GridSpec {
    /// Auto-sized box around the block means: per coordinate
    /// `[min - range, max + range]` where `range = max - min`, widened to
    /// `[min - 1, max + 1]` when the means are degenerate on that axis.
    pub fn auto_box(means: &BucketedMeans, points_per_axis: usize) -> Self {
        let d = means.dim();
        let mut lows = Vec::with_capacity(d);
        let mut highs = Vec::with_capacity(d);
        for j in 0..d {
            let col = means.matrix().column(j);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let range = if hi > lo { hi - lo } else { 1.0 };
            lows.push(lo - range);
            highs.push(hi + range);
        }
        Self::Box {
            lows,
            highs,
            points_per_axis,
        }
    }

    /// Grid spacing per axis for box grids.
    pub fn spacing(&self) -> Option<Vec<f64>> {
        match self {
            Self::Box {
                lows,
                highs,
                points_per_axis,
            } => Some(
                lows.iter()
                    .zip(highs)
                    .map(|(&lo, &hi)| (hi - lo) / (*points_per_axis as f64 - 1.0))
                    .collect(),
            ),
            Self::Angular { .. } => None,
        }
    }
}

/// Median of a value list by full sort: rank `(K+1)/2`, odd length required.
fn oracle_median(values: &[f64]) -> f64 {
    debug_assert!(values.len() % 2 == 1);
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted[(sorted.len() - 1) / 2]
}

/// Inter-quartile average by full sort over ranks
/// `ceil((K+1)/4) ..= floor(3(K+1)/4)`, odd length required.
fn oracle_interquartile(values: &[f64]) -> f64 {
    debug_assert!(values.len() % 2 == 1);
    let k = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let lo = (k + 4) / 4;
    let hi = (3 * k).div_ceil(4);
    let window = &sorted[lo - 1..hi];
    window.iter().sum::<f64>() / window.len() as f64
}

fn oracle_h(which: MomFunction, values: &[f64]) -> f64 {
    match which {
        MomFunction::Median => oracle_median(values),
        MomFunction::InterquartileAverage => oracle_interquartile(values),
    }
}

fn block_projections(means: &BucketedMeans, v: &DVector<f64>) -> Vec<f64> {
    (0..means.block_count())
        .map(|k| means.matrix().row(k).transpose().dot(v))
        .collect()
}

fn require_odd_blocks(means: &BucketedMeans) -> Result<()> {
    if means.block_count().is_multiple_of(2) {
        return Err(Error::InvalidBlockCount {
            k: means.block_count(),
            n: 0,
            reason: "oracle statistics require an odd block count".into(),
        });
    }
    Ok(())
}

/// Exhaustive directional maximum of `phi(u) = <mu, u> - h(u)` over evenly
/// spaced unit directions on the circle (`d = 2` only).
///
/// Returns the best raw value and its direction; no clipping at zero is
/// applied. This is the reference for the heuristic sphere ascent used by
/// ball conjugates.
pub fn grid_inner_sup(
    mu: &DVector<f64>,
    means: &BucketedMeans,
    which: MomFunction,
    directions: usize,
) -> Result<(f64, DVector<f64>)> {
    if means.dim() != 2 || mu.len() != 2 {
        return Err(Error::UnsupportedDimension {
            dim: means.dim().max(mu.len()),
            max: 2,
        });
    }
    require_odd_blocks(means)?;
    if directions < 4 {
        return Err(Error::InvalidParameter {
            name: "directions",
            reason: "need at least 4 directions".into(),
        });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_dir = DVector::zeros(2);
    for i in 0..directions {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / directions as f64;
        let u = DVector::from_vec(vec![theta.cos(), theta.sin()]);
        let proj = block_projections(means, &u);
        let value = mu.dot(&u) - oracle_h(which, &proj);
        if value > best {
            best = value;
            best_dir = u;
        }
    }
    Ok((best, best_dir))
}

/// Conjugate value `sup_{v in S} (<mu, v> - h(v))` by full enumeration
/// (finite variants, any dimension) or angular grid (ball, `d = 2`; the
/// one-dimensional ball reduces to the exact two directions).
fn oracle_conjugate_value(
    mu: &DVector<f64>,
    means: &BucketedMeans,
    set: &SymmetricSet,
    which: MomFunction,
    ball_directions: usize,
) -> Result<f64> {
    if let Some(points) = set.enumerated_points() {
        let mut best = f64::NEG_INFINITY;
        for p in &points {
            let proj = block_projections(means, p);
            best = best.max(mu.dot(p) - oracle_h(which, &proj));
        }
        return Ok(best);
    }
    let (dim, radius) = set.as_ball().expect("non-finite set is the ball");
    match dim {
        1 => {
            let mut best = f64::NEG_INFINITY;
            for sign in [1.0, -1.0] {
                let v = DVector::from_vec(vec![sign * radius]);
                let proj = block_projections(means, &v);
                best = best.max(mu.dot(&v) - oracle_h(which, &proj));
            }
            Ok(best.max(0.0))
        }
        2 => {
            let mut best = f64::NEG_INFINITY;
            for i in 0..ball_directions {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / ball_directions as f64;
                let v = DVector::from_vec(vec![radius * theta.cos(), radius * theta.sin()]);
                let proj = block_projections(means, &v);
                best = best.max(mu.dot(&v) - oracle_h(which, &proj));
            }
            Ok(best.max(0.0))
        }
        d => Err(Error::UnsupportedDimension { dim: d, max: 2 }),
    }
}

/// Result of a dense-grid argmin search.
#[derive(Debug, Clone)]
pub struct GridArgmin {
    /// Grid point attaining the smallest conjugate value.
    pub point: DVector<f64>,
    /// The value there.
    pub value: f64,
    /// Grid spacing per axis, for "within k cells" comparisons.
    pub spacing: Vec<f64>,
}

/// Exhaustive minimizer of the conjugate `mu -> sup_{v in S}(<mu,v> - h(v))`
/// over a dense box grid (`d <= 2`).
///
/// `ball_directions` sets the angular resolution of the inner supremum when
/// `S` is a two-dimensional ball; it is ignored for finite variants.
pub fn grid_argmin_conjugate(
    means: &BucketedMeans,
    set: &SymmetricSet,
    which: MomFunction,
    grid: &GridSpec,
    ball_directions: usize,
) -> Result<GridArgmin> {
    let d = means.dim();
    if d > 2 {
        return Err(Error::UnsupportedDimension { dim: d, max: 2 });
    }
    if set.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "grid_argmin_conjugate",
            expected: d,
            found: set.dim(),
        });
    }
    require_odd_blocks(means)?;
    let GridSpec::Box {
        lows,
        highs,
        points_per_axis,
    } = grid
    else {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "argmin search needs a box grid".into(),
        });
    };
    if lows.len() != d || highs.len() != d {
        return Err(Error::DimensionMismatch {
            context: "grid box",
            expected: d,
            found: lows.len(),
        });
    }
    let m = *points_per_axis;
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "points_per_axis",
            reason: "need at least 2 points per axis".into(),
        });
    }
    let axis = |j: usize, i: usize| lows[j] + (highs[j] - lows[j]) * i as f64 / (m as f64 - 1.0);
    let mut best_value = f64::INFINITY;
    let mut best_point = DVector::zeros(d);
    if d == 1 {
        for i in 0..m {
            let mu = DVector::from_vec(vec![axis(0, i)]);
            let value = oracle_conjugate_value(&mu, means, set, which, ball_directions)?;
            if value < best_value {
                best_value = value;
                best_point = mu;
            }
        }
    } else {
        for i0 in 0..m {
            for i1 in 0..m {
                let mu = DVector::from_vec(vec![axis(0, i0), axis(1, i1)]);
                let value = oracle_conjugate_value(&mu, means, set, which, ball_directions)?;
                if value < best_value {
                    best_value = value;
                    best_point = mu;
                }
            }
        }
    }
    Ok(GridArgmin {
        point: best_point,
        value: best_value,
        spacing: grid.spacing().expect("box grid has spacing"),
    })
}

/// Minmax median-of-means objective computed per sample, with no algebraic
/// shortcut: the median over blocks of the block averages of
/// `||X_i - mu||^2 - ||X_i - nu||^2`.
pub fn minmax_objective_oracle(
    mu: &DVector<f64>,
    nu: &DVector<f64>,
    data: &DMatrix<f64>,
    partition: &BlockPartition,
) -> Result<f64> {
    let d = data.ncols();
    if mu.len() != d || nu.len() != d {
        return Err(Error::DimensionMismatch {
            context: "minmax_objective_oracle",
            expected: d,
            found: mu.len().max(nu.len()),
        });
    }
    if data.nrows() != partition.n() {
        return Err(Error::DimensionMismatch {
            context: "minmax_objective_oracle rows",
            expected: partition.n(),
            found: data.nrows(),
        });
    }
    if partition.block_count().is_multiple_of(2) {
        return Err(Error::InvalidBlockCount {
            k: partition.block_count(),
            n: partition.n(),
            reason: "median needs an odd block count".into(),
        });
    }
    let mut block_values = Vec::with_capacity(partition.block_count());
    for block in partition.blocks() {
        let mut acc = 0.0;
        for &i in block {
            let x = data.row(i).transpose();
            acc += (&x - mu).norm_squared() - (&x - nu).norm_squared();
        }
        block_values.push(acc / block.len() as f64);
    }
    Ok(oracle_median(&block_values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn means_1d(values: &[f64]) -> BucketedMeans {
        BucketedMeans::from_means(DMatrix::from_fn(values.len(), 1, |i, _| values[i])).unwrap()
    }

    #[test]
    fn argmin_of_1d_median_conjugate_is_the_median() {
        // g(+1) = 2, g(-1) = -2, so the conjugate is |mu - 2| with argmin 2.
        let means = means_1d(&[1.0, 2.0, 3.0]);
        let set = SymmetricSet::finite_points(vec![DVector::from_vec(vec![1.0])]).unwrap();
        let grid = GridSpec::Box {
            lows: vec![0.0],
            highs: vec![4.0],
            points_per_axis: 401,
        };
        let out = grid_argmin_conjugate(&means, &set, MomFunction::Median, &grid, 16).unwrap();
        assert!((out.point[0] - 2.0).abs() <= out.spacing[0]);
        assert!(out.value <= out.spacing[0] + 1e-12);
    }

    #[test]
    fn inner_sup_on_singleton_block_matches_linear_maximum() {
        // K = 1: phi(u) = <mu - x0, u>, maximized along mu - x0.
        let means = BucketedMeans::from_means(DMatrix::from_row_slice(1, 2, &[1.0, -1.0])).unwrap();
        let mu = DVector::from_vec(vec![4.0, 3.0]);
        let (value, dir) =
            grid_inner_sup(&mu, &means, MomFunction::InterquartileAverage, 10_000).unwrap();
        let gap = DVector::from_vec(vec![3.0, 4.0]);
        assert!((value - 5.0).abs() < 5.0 * 1e-6);
        assert!((dir - gap / 5.0).norm() < 1e-3);
    }

    #[test]
    fn minmax_oracle_hand_value() {
        // Singleton blocks with means (1, 2, 3); mu = 0, nu = 2 gives block
        // values (0, 4, 8) and median 4.
        let data = DMatrix::from_fn(3, 1, |i, _| (i + 1) as f64);
        let p = BlockPartition::from_blocks(vec![vec![0], vec![1], vec![2]]).unwrap();
        let mu = DVector::from_vec(vec![0.0]);
        let nu = DVector::from_vec(vec![2.0]);
        assert_eq!(minmax_objective_oracle(&mu, &nu, &data, &p).unwrap(), 4.0);
    }

    #[test]
    fn auto_box_covers_triple_range() {
        let means = BucketedMeans::from_means(DMatrix::from_row_slice(
            3,
            2,
            &[0.0, 5.0, 1.0, 5.0, 2.0, 5.0],
        ))
        .unwrap();
        let GridSpec::Box { lows, highs, .. } = GridSpec::auto_box(&means, 11) else {
            panic!("auto_box returns a box");
        };
        assert_eq!(lows, vec![-2.0, 4.0]);
        assert_eq!(highs, vec![4.0, 6.0]);
    }

    #[test]
    fn high_dimension_is_rejected() {
        let means = BucketedMeans::from_means(DMatrix::zeros(3, 3)).unwrap();
        let set = SymmetricSet::canonical_cross(3).unwrap();
        let grid = GridSpec::auto_box(&means, 5);
        assert!(matches!(
            grid_argmin_conjugate(&means, &set, MomFunction::Median, &grid, 8),
            Err(Error::UnsupportedDimension { .. })
        ));
    }
}
