//! Exhaustive rank census over all `2^{n(k+1)}` coefficient tuples.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{rank_of_rows, EchelonBasis};
use crate::persym::{block_rows, tuple_count, MAX_K};

/// Default ceiling on `n(k+1)`: at most `2^28` leaves without forcing.
pub const DEFAULT_LOG2_LEAVES: usize = 28;
/// Hard ceiling on `n(k+1)`, even when forced.
pub const FORCED_LOG2_LEAVES: usize = 34;
/// Ceiling for the naive re-enumeration oracle.
pub const NAIVE_LOG2_LEAVES: usize = 24;

/// `counts[i]` is the number of tuples whose matrix has rank `i`, for
/// `i = 0..=min(2n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankDistribution {
    pub n: usize,
    pub k: usize,
    pub counts: Vec<BigUint>,
}

impl RankDistribution {
    /// Wraps counts, padding or trimming to `min(2n, k) + 1` entries.
    /// Trimming only drops zeros; anything else is a shape mismatch.
    pub fn new(n: usize, k: usize, mut counts: Vec<BigUint>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroWidth);
        }
        let len = max_rank(n, k) + 1;
        if counts.len() > len && counts[len..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Unsupported {
                n,
                k,
                reason: format!("nonzero count above the rank bound {}", len - 1),
            });
        }
        counts.resize(len, BigUint::zero());
        Ok(Self { n, k, counts })
    }

    pub fn max_rank(&self) -> usize {
        self.counts.len() - 1
    }

    /// Count for rank `i`, zero past the rank bound.
    pub fn get(&self, i: usize) -> BigUint {
        self.counts.get(i).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Checks the structural invariants: total `2^{(k+1)n}` and a single
    /// rank-0 tuple.
    pub fn is_consistent(&self) -> bool {
        self.total() == tuple_count(self.n, self.k) && self.counts[0] == BigUint::from(1u8)
    }

    fn from_histogram(n: usize, k: usize, hist: &[u64]) -> Self {
        let len = max_rank(n, k) + 1;
        debug_assert!(hist[len..].iter().all(|&c| c == 0));
        Self {
            n,
            k,
            counts: hist[..len].iter().map(|&c| BigUint::from(c)).collect(),
        }
    }
}

pub fn max_rank(n: usize, k: usize) -> usize {
    (2 * n).min(k)
}

fn check_budget(what: &'static str, n: usize, k: usize, limit: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroWidth);
    }
    if k > MAX_K {
        return Err(Error::Width(k));
    }
    let log2_cost = n * (k + 1);
    if log2_cost > limit {
        return Err(Error::Budget {
            what,
            log2_cost,
            limit,
        });
    }
    Ok(())
}

type Histogram = [u64; 65];

/// Counts leaves below `basis` with `remaining` blocks still to choose.
fn descend(basis: &EchelonBasis, remaining: usize, k: usize, hist: &mut Histogram) {
    let blocks = 1u64 << (k + 1);
    match remaining {
        0 => hist[basis.rank()] += 1,
        1 => {
            let base = basis.rank();
            for block in 0..blocks {
                let (r1, r2) = block_rows(block, k);
                hist[base + basis.pair_increase(r1, r2)] += 1;
            }
        }
        _ => {
            for block in 0..blocks {
                let (r1, r2) = block_rows(block, k);
                let mut next = *basis;
                next.push(r1);
                next.push(r2);
                descend(&next, remaining - 1, k, hist);
            }
        }
    }
}

fn merge(mut a: Histogram, b: Histogram) -> Histogram {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn run_census(n: usize, k: usize, workers: usize) -> Result<RankDistribution> {
    let root = EchelonBasis::new(k)?;
    if n == 0 {
        let mut hist = [0; 65];
        hist[0] = 1;
        return Ok(RankDistribution::from_histogram(n, k, &hist));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let hist = pool.install(|| {
        (0..1u64 << (k + 1))
            .into_par_iter()
            .fold(
                || [0u64; 65],
                |mut hist, block| {
                    let (r1, r2) = block_rows(block, k);
                    let mut first = root;
                    first.push(r1);
                    first.push(r2);
                    descend(&first, n - 1, k, &mut hist);
                    hist
                },
            )
            .reduce(|| [0u64; 65], merge)
    });
    Ok(RankDistribution::from_histogram(n, k, &hist))
}

/// Rank distribution by depth-first search over blocks, sharing elimination
/// work between all tuples with a common block prefix. The first block is
/// split across `workers` threads.
///
/// Refuses `n(k+1) > 28`; see [`census_forced`].
pub fn census(n: usize, k: usize, workers: usize) -> Result<RankDistribution> {
    check_budget("census", n, k, DEFAULT_LOG2_LEAVES)?;
    run_census(n, k, workers)
}

/// Like [`census`] but accepts up to `n(k+1) = 34`.
pub fn census_forced(n: usize, k: usize, workers: usize) -> Result<RankDistribution> {
    check_budget("census", n, k, FORCED_LOG2_LEAVES)?;
    run_census(n, k, workers)
}

/// Independent oracle: a fresh column-sweep elimination for every tuple,
/// no shared state, no threads.
pub fn census_naive(n: usize, k: usize) -> Result<RankDistribution> {
    check_budget("census_naive", n, k, NAIVE_LOG2_LEAVES)?;
    let width = k + 1;
    let row_mask = (1u64 << k) - 1;
    let mut hist = [0u64; 65];
    let mut rows = vec![0u64; 2 * n];
    for idx in 0u64..1 << (n * width) {
        for j in 0..n {
            let mut first = 0u64;
            let mut second = 0u64;
            for c in 0..k {
                first |= ((idx >> (j * width + c)) & 1) << c;
                second |= ((idx >> (j * width + c + 1)) & 1) << c;
            }
            rows[2 * j] = first & row_mask;
            rows[2 * j + 1] = second & row_mask;
        }
        hist[rank_of_rows(&mut rows)] += 1;
    }
    Ok(RankDistribution::from_histogram(n, k, &hist))
}

/// Rough leaf count for a refused request, as `(log2 leaves, leaves)`.
pub fn cost_estimate(n: usize, k: usize) -> (usize, Option<u64>) {
    let log2 = n * (k + 1);
    let leaves = (BigUint::from(1u8) << log2).to_u64();
    (log2, leaves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(d: &RankDistribution) -> Vec<u64> {
        d.counts.iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn n1_k10() {
        assert_eq!(counts(&census(1, 10, 2).unwrap()), [1, 3, 2044]);
    }

    #[test]
    fn empty_family_for_any_k() {
        for k in 1..=12 {
            assert_eq!(counts(&census(0, k, 1).unwrap()), [1]);
            assert_eq!(counts(&census_naive(0, k).unwrap()), [1]);
        }
    }

    #[test]
    fn naive_small_cases() {
        assert_eq!(counts(&census_naive(1, 2).unwrap()), [1, 3, 4]);
        assert_eq!(counts(&census_naive(1, 1).unwrap()), [1, 3]);
    }

    #[test]
    fn tree_search_matches_naive() {
        for n in 0..=5 {
            for k in 1..=19 {
                if n * (k + 1) > 20 {
                    continue;
                }
                let fast = census(n, k, 1).unwrap();
                assert_eq!(fast, census_naive(n, k).unwrap(), "n={n} k={k}");
                assert!(fast.is_consistent());
            }
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let one = census(2, 6, 1).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(census(2, 6, w).unwrap(), one);
        }
    }

    #[test]
    fn rank_one_count() {
        for n in 1..=4 {
            for k in 2..=5 {
                let d = census(n, k, 1).unwrap();
                assert_eq!(
                    d.counts[1],
                    BigUint::from(3 * ((1u64 << n) - 1)),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn budget_guards() {
        assert!(matches!(
            census(3, 9, 1),
            Err(Error::Budget {
                log2_cost: 30,
                limit: 28,
                ..
            })
        ));
        assert!(matches!(
            census_forced(5, 10, 1),
            Err(Error::Budget {
                log2_cost: 55,
                limit: 34,
                ..
            })
        ));
        assert!(census_naive(3, 8).is_err());
        assert_eq!(census(1, 0, 1), Err(Error::ZeroWidth));
    }

    #[test]
    fn distribution_padding() {
        let d = RankDistribution::new(1, 10, vec![BigUint::from(1u8)]).unwrap();
        assert_eq!(d.counts.len(), 3);
        assert!(
            RankDistribution::new(1, 10, vec![1u8.into(), 0u8.into(), 0u8.into(), 1u8.into()])
                .is_err()
        );
        assert_eq!(d.get(7), BigUint::zero());
    }
}
