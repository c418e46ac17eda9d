//! Block partitions, bucketed means, and the two median-of-means functions.
//!
//! Data is split into `K` equal-size blocks (`K` odd, `K | N`), each block
//! is averaged, and directional statistics are computed from the block-mean
//! projections `<Xbar_k, v>`:
//!
//! ```text
//! g(v) = Med_k <Xbar_k, v>                    (middle order statistic)
//! f(v) = mean of the sorted projections with ranks in
//!        I_K = { ceil((K+1)/4), ..., floor(3(K+1)/4) }
//! ```
//!
//! The inter-quartile window `I_K` is symmetric around the median rank, so
//! both functions are odd and positively homogeneous in `v`. `K` must be
//! odd throughout: the median is always a single order statistic, never an
//! average of two (which would break the subgradient structure downstream).

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A partition of `{0, ..., N-1}` into `K` equal-size blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    seed: Option<u64>,
}

impl BlockPartition {
    /// Number of indexed samples.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks `K`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Common block size `N / K`.
    pub fn block_size(&self) -> usize {
        self.n / self.blocks.len()
    }

    /// The blocks, each a list of sample indices.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Seed used by [`make_partition`], `None` for hand-built partitions.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Builds a partition from explicit blocks, validating that they are
    /// disjoint, equal-size, and cover `{0, ..., N-1}` for odd `K`.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let k = blocks.len();
        let n: usize = blocks.iter().map(Vec::len).sum();
        validate_block_count(n, k)?;
        let size = n / k;
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.len() != size {
                return Err(Error::InvalidBlockCount {
                    k,
                    n,
                    reason: format!("blocks must have equal size {size}, found {}", block.len()),
                });
            }
            for &i in block {
                if i >= n || seen[i] {
                    return Err(Error::InvalidParameter {
                        name: "blocks",
                        reason: format!("index {i} out of range or repeated"),
                    });
                }
                seen[i] = true;
            }
        }
        Ok(Self {
            n,
            blocks,
            seed: None,
        })
    }
}

fn validate_block_count(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidBlockCount {
            k,
            n,
            reason: "need 1 <= K <= N".into(),
        });
    }
    if k.is_multiple_of(2) {
        return Err(Error::InvalidBlockCount {
            k,
            n,
            reason: "K must be odd so the median is a single order statistic".into(),
        });
    }
    if !n.is_multiple_of(k) {
        return Err(Error::InvalidBlockCount {
            k,
            n,
            reason: "K must divide N (equal-size blocks)".into(),
        });
    }
    Ok(())
}

/// Draws a uniformly random equipartition of `{0, ..., n-1}` into `k`
/// blocks of size `n / k`. Requires `k` odd and `k | n`; deterministic for
/// a fixed seed.
pub fn make_partition(n: usize, k: usize, seed: u64) -> Result<BlockPartition> {
    validate_block_count(n, k)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let size = n / k;
    let blocks = order.chunks(size).map(<[usize]>::to_vec).collect();
    Ok(BlockPartition {
        n,
        blocks,
        seed: Some(seed),
    })
}

/// Per-block averages of a data matrix (one sample per row).
#[derive(Debug, Clone, PartialEq)]
pub struct BucketedMeans {
    /// `K x d`: row `k` is the mean of block `k`.
    means: DMatrix<f64>,
    seed: Option<u64>,
}

impl BucketedMeans {
    /// Number of blocks `K`.
    pub fn block_count(&self) -> usize {
        self.means.nrows()
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.means.ncols()
    }

    /// The `K x d` matrix of block means.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.means
    }

    /// The mean of block `k` as a column vector.
    pub fn block_mean(&self, k: usize) -> DVector<f64> {
        self.means.row(k).transpose()
    }

    /// Average of the block means with the given indices.
    pub fn mean_over_blocks(&self, indices: &[usize]) -> Result<DVector<f64>> {
        if indices.is_empty() {
            return Err(Error::EmptyData {
                context: "mean_over_blocks indices",
            });
        }
        let mut acc = DVector::zeros(self.dim());
        for &k in indices {
            if k >= self.block_count() {
                return Err(Error::InvalidParameter {
                    name: "indices",
                    reason: format!("block {k} out of range"),
                });
            }
            acc += self.block_mean(k);
        }
        Ok(acc / indices.len() as f64)
    }

    /// Partition seed this summary came from, `None` for direct builds.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Wraps an explicit `K x d` block-mean matrix.
    ///
    /// Intended for tests and hand-built scenarios; no oddness requirement
    /// is imposed here, so the directional statistics can exercise their
    /// own `K` validation.
    pub fn from_means(means: DMatrix<f64>) -> Result<Self> {
        if means.nrows() == 0 || means.ncols() == 0 {
            return Err(Error::EmptyData {
                context: "block-mean matrix",
            });
        }
        Ok(Self { means, seed: None })
    }

    /// Projections `<Xbar_k, v>` for all blocks.
    pub fn projections(&self, v: &DVector<f64>) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "block-mean projections",
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok((&self.means * v).iter().copied().collect())
    }
}

/// Selector for the two directional median-of-means statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomFunction {
    /// The median function `g`.
    Median,
    /// The inter-quartile average `f`.
    InterquartileAverage,
}

impl MomFunction {
    /// Evaluates the selected statistic at direction `v`.
    pub fn evaluate(self, v: &DVector<f64>, means: &BucketedMeans) -> Result<f64> {
        match self {
            Self::Median => g_median(v, means),
            Self::InterquartileAverage => f_interquartile(v, means),
        }
    }

    /// Evaluates the statistic together with one of its subgradients in `v`
    /// (the attaining block mean for `g`, the average of the active block
    /// means for `f`).
    pub fn value_and_subgradient(
        self,
        v: &DVector<f64>,
        means: &BucketedMeans,
    ) -> Result<(f64, DVector<f64>)> {
        match self {
            Self::Median => {
                let (value, block) = g_median_block(v, means)?;
                Ok((value, means.block_mean(block)))
            }
            Self::InterquartileAverage => {
                let active = active_interquartile_blocks(v, means)?;
                let proj = means.projections(v)?;
                let value = active.iter().map(|&b| proj[b]).sum::<f64>() / active.len() as f64;
                Ok((value, means.mean_over_blocks(&active)?))
            }
        }
    }

    /// Conventional one-letter name used in reports and configs.
    pub fn letter(self) -> &'static str {
        match self {
            Self::Median => "g",
            Self::InterquartileAverage => "f",
        }
    }
}

/// Computes per-block averages of `data` under `partition`.
pub fn bucketed_means(data: &DMatrix<f64>, partition: &BlockPartition) -> Result<BucketedMeans> {
    if data.nrows() != partition.n() {
        return Err(Error::DimensionMismatch {
            context: "bucketed_means rows",
            expected: partition.n(),
            found: data.nrows(),
        });
    }
    if data.ncols() == 0 {
        return Err(Error::EmptyData {
            context: "bucketed_means columns",
        });
    }
    let k = partition.block_count();
    let d = data.ncols();
    let size = partition.block_size() as f64;
    let mut means = DMatrix::zeros(k, d);
    for (b, block) in partition.blocks().iter().enumerate() {
        for &i in block {
            for j in 0..d {
                means[(b, j)] += data[(i, j)];
            }
        }
        for j in 0..d {
            means[(b, j)] /= size;
        }
    }
    Ok(BucketedMeans {
        means,
        seed: partition.seed(),
    })
}

/// Inclusive 1-indexed inter-quartile rank window
/// `I_K = { ceil((K+1)/4), ..., floor(3(K+1)/4) }`.
///
/// The endpoints sum to `K + 1`, so the window is symmetric around the
/// median rank `(K+1)/2` for every odd `K`.
pub fn interquartile_ranks(k: usize) -> (usize, usize) {
    ((k + 4) / 4, (3 * k).div_ceil(4))
}

fn require_odd(k: usize, context: &str) -> Result<()> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidBlockCount {
            k,
            n: 0,
            reason: format!("{context} requires an odd block count"),
        });
    }
    Ok(())
}

/// The median function `g(v) = Med_k <Xbar_k, v>`.
///
/// The median of the projection *values* (not absolute values): the rank
/// `(K+1)/2` order statistic. Requires odd `K`.
pub fn g_median(v: &DVector<f64>, means: &BucketedMeans) -> Result<f64> {
    Ok(g_median_block(v, means)?.0)
}

/// The median projection together with the lowest-index block attaining it.
///
/// The block mean of the returned index is a subgradient of `g` at `v`.
pub fn g_median_block(v: &DVector<f64>, means: &BucketedMeans) -> Result<(f64, usize)> {
    let k = means.block_count();
    require_odd(k, "g_median")?;
    let proj = means.projections(v)?;
    let mut sorted = proj.clone();
    let mid = (k - 1) / 2;
    let (_, median, _) = sorted.select_nth_unstable_by(mid, f64::total_cmp);
    let median = *median;
    let block = proj
        .iter()
        .position(|&p| p == median)
        .expect("median value comes from the projection list");
    Ok((median, block))
}

/// The inter-quartile average `f(v)`: the mean of the sorted projections
/// with ranks in [`interquartile_ranks`]. Requires odd `K`.
pub fn f_interquartile(v: &DVector<f64>, means: &BucketedMeans) -> Result<f64> {
    let k = means.block_count();
    require_odd(k, "f_interquartile")?;
    let mut proj = means.projections(v)?;
    proj.sort_unstable_by(f64::total_cmp);
    let (lo, hi) = interquartile_ranks(k);
    let window = &proj[lo - 1..hi];
    Ok(window.iter().sum::<f64>() / window.len() as f64)
}

/// The blocks whose projections occupy the inter-quartile ranks at `v`.
///
/// Ties among equal projection values are resolved toward the lowest block
/// indices (so equal projections everywhere select the `|I_K|` lowest
/// blocks). The result is ordered by ascending projection value, ties by
/// ascending block index; averaging the projections in the returned order
/// reproduces [`f_interquartile`] exactly, summation order included.
pub fn active_interquartile_blocks(v: &DVector<f64>, means: &BucketedMeans) -> Result<Vec<usize>> {
    let k = means.block_count();
    require_odd(k, "active_interquartile_blocks")?;
    let proj = means.projections(v)?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_unstable_by(|&a, &b| proj[a].total_cmp(&proj[b]).then(a.cmp(&b)));
    let (lo, hi) = interquartile_ranks(k);
    let mut selected = Vec::with_capacity(hi - lo + 1);
    // Walk runs of equal projection values. A run occupying sorted
    // positions i..=j (0-indexed) intersects the window in
    // max(i+1, lo)..=min(j+1, hi); the run is already ordered by block
    // index, so its lowest-index blocks fill those slots.
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j + 1 < k && proj[order[j + 1]] == proj[order[i]] {
            j += 1;
        }
        let win_lo = (i + 1).max(lo);
        let win_hi = (j + 1).min(hi);
        if win_lo <= win_hi {
            let count = win_hi - win_lo + 1;
            selected.extend_from_slice(&order[i..i + count]);
        }
        i = j + 1;
    }
    Ok(selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn means_1d(values: &[f64]) -> BucketedMeans {
        BucketedMeans::from_means(DMatrix::from_fn(values.len(), 1, |i, _| values[i])).unwrap()
    }

    fn v1(x: f64) -> DVector<f64> {
        DVector::from_vec(vec![x])
    }

    #[test]
    fn partition_covers_disjointly_with_equal_sizes() {
        let p = make_partition(20, 5, 3).unwrap();
        assert_eq!(p.block_count(), 5);
        assert_eq!(p.block_size(), 4);
        let mut seen = [false; 20];
        for block in p.blocks() {
            assert_eq!(block.len(), 4);
            for &i in block {
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn partition_is_deterministic_per_seed() {
        assert_eq!(
            make_partition(30, 3, 9).unwrap(),
            make_partition(30, 3, 9).unwrap()
        );
        assert_ne!(
            make_partition(30, 3, 9).unwrap(),
            make_partition(30, 3, 10).unwrap()
        );
    }

    #[test]
    fn partition_rejects_bad_block_counts() {
        assert!(make_partition(10, 0, 0).is_err());
        assert!(make_partition(10, 4, 0).is_err(), "even K");
        assert!(make_partition(10, 3, 0).is_err(), "3 does not divide 10");
        assert!(make_partition(3, 5, 0).is_err(), "K > N");
        assert!(make_partition(10, 5, 0).is_ok());
    }

    #[test]
    fn singleton_partition_when_k_equals_n() {
        let p = make_partition(7, 7, 1).unwrap();
        assert!(p.blocks().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn bucketed_means_on_contiguous_blocks() {
        let data = DMatrix::from_fn(9, 1, |i, _| i as f64);
        let p =
            BlockPartition::from_blocks(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap();
        let m = bucketed_means(&data, &p).unwrap();
        assert_eq!(
            m.matrix(),
            &DMatrix::from_fn(3, 1, |i, _| 1.0 + 3.0 * i as f64)
        );
    }

    #[test]
    fn bucketed_means_respects_block_membership_not_order() {
        let data = DMatrix::from_fn(6, 2, |i, j| (2 * i + j) as f64);
        let scrambled =
            BlockPartition::from_blocks(vec![vec![5, 0], vec![1, 4], vec![3, 2]]).unwrap();
        let m = bucketed_means(&data, &scrambled).unwrap();
        // Block 0 averages rows 5 and 0: ((10, 11) + (0, 1)) / 2.
        assert_eq!(m.block_mean(0), DVector::from_vec(vec![5.0, 6.0]));
        assert_eq!(m.block_mean(1), DVector::from_vec(vec![5.0, 6.0]));
        assert_eq!(m.block_mean(2), DVector::from_vec(vec![5.0, 6.0]));
    }

    #[test]
    fn from_blocks_validates_shape() {
        assert!(BlockPartition::from_blocks(vec![vec![0, 1], vec![2]]).is_err());
        assert!(BlockPartition::from_blocks(vec![vec![0], vec![0], vec![1]]).is_err());
        assert!(BlockPartition::from_blocks(vec![vec![0], vec![2], vec![1]]).is_ok());
    }

    #[test]
    fn g_median_is_middle_order_statistic_of_values() {
        let m = means_1d(&[1.0, 2.0, 3.0, 5.0, 9.0]);
        assert_eq!(g_median(&v1(1.0), &m).unwrap(), 3.0);
        // Median of the values, not the absolute values.
        let m = means_1d(&[-5.0, 1.0, 2.0]);
        assert_eq!(g_median(&v1(1.0), &m).unwrap(), 1.0);
    }

    #[test]
    fn g_median_on_plane_example() {
        let m = BucketedMeans::from_means(DMatrix::from_row_slice(
            3,
            2,
            &[1.0, 0.0, 0.0, 1.0, 2.0, 2.0],
        ))
        .unwrap();
        let v = DVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(g_median(&v, &m).unwrap(), 1.0);
    }

    #[test]
    fn g_median_block_breaks_ties_to_lowest_index() {
        let m = means_1d(&[2.0, 1.0, 2.0, 2.0, 3.0]);
        let (value, block) = g_median_block(&v1(1.0), &m).unwrap();
        assert_eq!(value, 2.0);
        assert_eq!(block, 0);
    }

    #[test]
    fn even_block_count_is_rejected() {
        let m = means_1d(&[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            g_median(&v1(1.0), &m),
            Err(Error::InvalidBlockCount { .. })
        ));
        assert!(f_interquartile(&v1(1.0), &m).is_err());
        assert!(active_interquartile_blocks(&v1(1.0), &m).is_err());
    }

    #[test]
    fn interquartile_window_is_symmetric() {
        assert_eq!(interquartile_ranks(1), (1, 1));
        assert_eq!(interquartile_ranks(3), (1, 3));
        assert_eq!(interquartile_ranks(5), (2, 4));
        assert_eq!(interquartile_ranks(7), (2, 6));
        assert_eq!(interquartile_ranks(9), (3, 7));
        for k in (1..200).step_by(2) {
            let (lo, hi) = interquartile_ranks(k);
            assert_eq!(lo + hi, k + 1, "window asymmetric at K={k}");
            assert!((1..=k).contains(&lo) && lo <= hi);
        }
    }

    #[test]
    fn f_interquartile_hand_values() {
        // Sorted projections (-10, 1, 2, 3, 4, 5, 100): ranks 2..6 average 3.
        let m = means_1d(&[3.0, 100.0, 1.0, -10.0, 4.0, 5.0, 2.0]);
        assert_eq!(f_interquartile(&v1(1.0), &m).unwrap(), 3.0);
        // K = 5: middle three of (10, 20, 30, 40, 50).
        let m = means_1d(&[50.0, 10.0, 40.0, 20.0, 30.0]);
        assert_eq!(f_interquartile(&v1(1.0), &m).unwrap(), 30.0);
        // K = 1: the single projection.
        let m = means_1d(&[4.25]);
        assert_eq!(f_interquartile(&v1(2.0), &m).unwrap(), 8.5);
    }

    #[test]
    fn active_blocks_pick_interquartile_ranks() {
        let m = means_1d(&[3.0, 100.0, 1.0, -10.0, 4.0, 5.0, 2.0]);
        // Sorted: -10(b3), 1(b2), 2(b6), 3(b0), 4(b4), 5(b5), 100(b1);
        // ranks 2..6 are blocks 2, 6, 0, 4, 5 in value order.
        assert_eq!(
            active_interquartile_blocks(&v1(1.0), &m).unwrap(),
            vec![2, 6, 0, 4, 5]
        );
    }

    #[test]
    fn active_blocks_tie_break_prefers_lowest_indices() {
        let m = means_1d(&[1.0; 7]);
        assert_eq!(
            active_interquartile_blocks(&v1(1.0), &m).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        // Value 0 sits at blocks 3, 5, 6; the window needs two of them.
        let m = means_1d(&[1.0, 2.0, 3.0, 0.0, 4.0, 0.0, 0.0]);
        assert_eq!(
            active_interquartile_blocks(&v1(1.0), &m).unwrap(),
            vec![3, 5, 0, 1, 2]
        );
    }

    #[test]
    fn active_block_average_reproduces_f_exactly() {
        let mut rng = rng_from_seed(21);
        for trial in 0..300 {
            let k = [1, 3, 5, 7, 9, 29][trial % 6];
            let m = BucketedMeans::from_means(DMatrix::from_fn(k, 3, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            }))
            .unwrap();
            let v = DVector::from_fn(3, |_, _| rng.sample::<f64, _>(StandardNormal));
            let active = active_interquartile_blocks(&v, &m).unwrap();
            let proj = m.projections(&v).unwrap();
            let avg = active.iter().map(|&b| proj[b]).sum::<f64>() / active.len() as f64;
            assert_eq!(avg, f_interquartile(&v, &m).unwrap());
        }
    }

    #[test]
    fn f_and_g_are_odd_and_homogeneous() {
        let mut rng = rng_from_seed(22);
        for trial in 0..2_000 {
            let k = [1, 3, 5, 7][trial % 4];
            let m = BucketedMeans::from_means(DMatrix::from_fn(k, 2, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            }))
            .unwrap();
            let v = DVector::from_fn(2, |_, _| rng.sample::<f64, _>(StandardNormal));
            let theta: f64 = 3.0 * rng.sample::<f64, _>(StandardNormal);
            for (eval, name) in [
                (
                    g_median as fn(&DVector<f64>, &BucketedMeans) -> Result<f64>,
                    "g",
                ),
                (f_interquartile, "f"),
            ] {
                let base = eval(&v, &m).unwrap();
                let neg = eval(&(-&v), &m).unwrap();
                let scaled = eval(&(&v * theta), &m).unwrap();
                let tol = 1e-12 * base.abs().max(1.0) * theta.abs().max(1.0);
                assert!((neg + base).abs() <= tol, "{name} not odd");
                assert!(
                    (scaled - theta * base).abs() <= tol,
                    "{name} not homogeneous"
                );
            }
        }
    }

    #[test]
    fn f_and_g_are_bounded_by_extreme_projections() {
        let mut rng = rng_from_seed(23);
        for _ in 0..500 {
            let m = BucketedMeans::from_means(DMatrix::from_fn(9, 2, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            }))
            .unwrap();
            let v = DVector::from_fn(2, |_, _| rng.sample::<f64, _>(StandardNormal));
            let proj = m.projections(&v).unwrap();
            let lo = proj.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for eval in [g_median, f_interquartile] {
                let val = eval(&v, &m).unwrap();
                assert!(val >= lo && val <= hi);
            }
        }
    }

    #[test]
    fn k_equals_one_reduces_to_single_projection() {
        let data = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let p = make_partition(4, 1, 0).unwrap();
        let m = bucketed_means(&data, &p).unwrap();
        let v = DVector::from_vec(vec![1.0, -1.0]);
        let full_mean_proj = -1.0; // mean (4, 5) projected on (1, -1)
        assert_eq!(g_median(&v, &m).unwrap(), full_mean_proj);
        assert_eq!(f_interquartile(&v, &m).unwrap(), full_mean_proj);
        assert_eq!(active_interquartile_blocks(&v, &m).unwrap(), vec![0]);
    }
}
