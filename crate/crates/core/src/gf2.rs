//! Bit-packed GF(2) matrices whose rows fit in a single machine word.
//!
//! Bit `c` of a row word is the entry in column `c`. Pivots are always the
//! lowest set bit of a row.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_COLS: usize = 64;

#[inline]
fn width_mask(cols: usize) -> u64 {
    if cols >= 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

impl GF2Matrix {
    /// Wraps row words, rejecting widths outside `1..=64` and rows with
    /// stray bits past the last column.
    pub fn new(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols == 0 || cols > MAX_COLS {
            return Err(Error::Width(cols));
        }
        let mask = width_mask(cols);
        if let Some(row) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::RowOverflow { row, cols });
        }
        Ok(Self { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(cols, vec![0; rows])
    }

    /// Builds a matrix from rows of 0/1 entries, column 0 first.
    pub fn from_bits(cols: usize, bits: &[&[u8]]) -> Result<Self> {
        let rows = bits
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(0u64, |acc, (c, &b)| acc | (u64::from(b & 1) << c))
            })
            .collect();
        Self::new(cols, rows)
    }

    /// Caller guarantees the invariants already hold.
    pub(crate) fn from_raw(cols: usize, rows: Vec<u64>) -> Self {
        debug_assert!((1..=MAX_COLS).contains(&cols));
        debug_assert!(rows.iter().all(|r| r & !width_mask(cols) == 0));
        Self { cols, rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_words(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        col < self.cols && (self.rows[row] >> col) & 1 == 1
    }

    /// Transpose. Fails only when the row count exceeds 64 (it becomes the width).
    pub fn transpose(&self) -> Result<Self> {
        let rows = self.rows.len();
        if rows == 0 || rows > MAX_COLS {
            return Err(Error::Width(rows));
        }
        let out = (0..self.cols)
            .map(|c| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (r, w)| acc | (((w >> c) & 1) << r))
            })
            .collect();
        Ok(Self::from_raw(rows, out))
    }

    /// Dimension of the row space over GF(2).
    pub fn rank(&self) -> usize {
        rank_of_rows(&mut self.rows.clone())
    }
}

/// Column-sweep Gaussian elimination in place. Rows are permuted and
/// reduced; the return value is the rank.
pub fn rank_of_rows(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    let mut remaining = rows.iter().fold(0u64, |acc, r| acc | r);
    while remaining != 0 && rank < rows.len() {
        let col = remaining.trailing_zeros();
        remaining &= remaining - 1;
        let bit = 1u64 << col;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for r in &mut rows[rank + 1..] {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let s: String = (0..self.cols)
                .map(|c| if (r >> c) & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// Row-echelon state with pairwise distinct pivots (lowest set bit).
///
/// Rows are not fully reduced: a stored row may have bits in columns that are
/// pivots of rows with a smaller pivot. Insertion only ever XORs rows whose
/// pivot is the current lowest bit, so it costs at most one XOR per pivot.
///
/// The value is `Copy`; [`EchelonBasis::insert_row`] leaves `self` untouched,
/// which is what tree searches need for backtracking.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct EchelonBasis {
    /// `by_pivot[c]` is the stored row whose pivot is column `c` (0 if none).
    by_pivot: [u64; MAX_COLS],
    pivots: u64,
    cols: u8,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Result<Self> {
        if cols == 0 || cols > MAX_COLS {
            return Err(Error::Width(cols));
        }
        Ok(Self {
            by_pivot: [0; MAX_COLS],
            pivots: 0,
            cols: cols as u8,
        })
    }

    pub fn cols(&self) -> usize {
        usize::from(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.pivots.count_ones() as usize
    }

    /// Bitmask of pivot columns.
    pub fn pivot_cols(&self) -> u64 {
        self.pivots
    }

    /// Stored rows in increasing pivot order.
    pub fn pivot_rows(&self) -> impl Iterator<Item = u64> + '_ {
        PivotIter(self.pivots).map(move |c| self.by_pivot[c])
    }

    /// Reduces `v` until its lowest bit is not a pivot. Returns 0 exactly
    /// when `v` lies in the span.
    #[inline]
    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let p = v.trailing_zeros() as usize;
            if (self.pivots >> p) & 1 == 0 {
                break;
            }
            v ^= self.by_pivot[p];
        }
        v
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// In-place insertion; returns whether the rank grew.
    #[inline]
    pub fn push(&mut self, row: u64) -> bool {
        debug_assert!(row & !width_mask(self.cols()) == 0, "row wider than basis");
        let v = self.reduce(row);
        if v == 0 {
            return false;
        }
        let p = v.trailing_zeros() as usize;
        self.by_pivot[p] = v;
        self.pivots |= 1 << p;
        true
    }

    /// Persistent insertion: returns the extended basis and whether the rank
    /// grew, leaving `self` unchanged.
    pub fn insert_row(&self, row: u64) -> (Self, bool) {
        let mut next = *self;
        let grew = next.push(row);
        (next, grew)
    }

    /// Rank increase from adding both `a` and `b`, without building the
    /// extended basis. `{0, a, b, a^b}` modulo the span has `2^increase`
    /// classes.
    #[inline]
    pub fn pair_increase(&self, a: u64, b: u64) -> usize {
        let ra = self.reduce(a);
        let rb = self.reduce(b);
        match (ra == 0, rb == 0) {
            (true, true) => 0,
            (true, false) | (false, true) => 1,
            (false, false) => {
                if ra == rb || self.contains(ra ^ rb) {
                    1
                } else {
                    2
                }
            }
        }
    }
}

impl fmt::Debug for EchelonBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EchelonBasis")
            .field("cols", &self.cols)
            .field("rows", &self.pivot_rows().collect::<Vec<_>>())
            .finish()
    }
}

struct PivotIter(u64);

impl Iterator for PivotIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Span size by enumerating all XOR combinations of the rows.
    fn span_rank(rows: &[u64]) -> usize {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u64..(1 << rows.len()) {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .fold(0, |acc, (_, r)| acc ^ r);
            seen.insert(v);
        }
        seen.len().trailing_zeros() as usize
    }

    /// Largest independent row subset, by trying every subset.
    fn largest_independent_subset(rows: &[u64]) -> usize {
        (0u64..(1 << rows.len()))
            .filter(|mask| {
                let sub: Vec<u64> = rows
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .map(|(_, r)| *r)
                    .collect();
                span_rank(&sub) == sub.len()
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(GF2Matrix::zeros(2, 10).unwrap().rank(), 0);
        assert_eq!(GF2Matrix::zeros(0, 10).unwrap().rank(), 0);
    }

    #[test]
    fn unit_rows_are_independent() {
        let m = GF2Matrix::from_bits(
            10,
            &[
                &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn random_6x10_matches_subset_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows: Vec<u64> = (0..6).map(|_| rng.gen::<u64>() & 0x3ff).collect();
            let m = GF2Matrix::new(10, rows.clone()).unwrap();
            assert_eq!(m.rank(), largest_independent_subset(&rows), "{m:?}");
        }
    }

    #[test]
    fn exhaustive_small_matrices_match_span_oracle() {
        for nrows in 0..=4usize {
            for cols in 1..=6usize {
                let bits = nrows * cols;
                for idx in 0u64..(1 << bits) {
                    let rows: Vec<u64> = (0..nrows)
                        .map(|r| (idx >> (r * cols)) & width_mask(cols))
                        .collect();
                    let m = GF2Matrix::new(cols, rows.clone()).unwrap();
                    assert_eq!(m.rank(), span_rank(&rows));
                }
            }
        }
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert_eq!(GF2Matrix::new(0, vec![]), Err(Error::Width(0)));
        assert_eq!(GF2Matrix::new(65, vec![]), Err(Error::Width(65)));
        assert_eq!(
            GF2Matrix::new(3, vec![1, 8]),
            Err(Error::RowOverflow { row: 1, cols: 3 })
        );
        assert!(GF2Matrix::new(64, vec![u64::MAX]).is_ok());
    }

    #[test]
    fn insert_zero_and_duplicates_do_not_grow() {
        let b = EchelonBasis::new(8).unwrap();
        let (b1, grew) = b.insert_row(0b1010);
        assert!(grew);
        let (b2, grew) = b1.insert_row(0);
        assert!(!grew);
        assert_eq!(b2, b1);
        let (b3, grew) = b1.insert_row(0b1010);
        assert!(!grew);
        assert_eq!(b3, b1);
        // the original value is untouched
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn pivots_are_lowest_bits_and_distinct() {
        let mut b = EchelonBasis::new(8).unwrap();
        for r in [0b0110, 0b0011, 0b0101, 0b1000] {
            b.push(r);
        }
        assert_eq!(b.rank(), 3);
        for row in b.pivot_rows() {
            assert_ne!(b.pivot_cols() & (1 << row.trailing_zeros()), 0);
        }
        assert_eq!(b.pivot_rows().count(), b.rank());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = GF2Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0..(1u64 << c), r)
                .prop_map(move |rows| GF2Matrix::new(c, rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(12)) {
            prop_assert_eq!(m.rank(), m.transpose().unwrap().rank());
        }

        #[test]
        fn rank_invariant_under_row_operations(
            m in arb_matrix(12),
            i in 0usize..12,
            j in 0usize..12,
            seed in any::<u64>(),
        ) {
            let rows = m.row_words().to_vec();
            let (i, j) = (i % rows.len(), j % rows.len());
            let mut permuted = rows.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for a in (1..permuted.len()).rev() {
                permuted.swap(a, rng.gen_range(0..=a));
            }
            prop_assert_eq!(GF2Matrix::new(m.cols(), permuted).unwrap().rank(), m.rank());
            if i != j {
                let mut added = rows;
                added[i] ^= added[j];
                prop_assert_eq!(GF2Matrix::new(m.cols(), added).unwrap().rank(), m.rank());
            }
        }

        #[test]
        fn insertion_counts_match_rank(m in arb_matrix(12), seed in any::<u64>()) {
            let mut rows = m.row_words().to_vec();
            let count = |rows: &[u64]| {
                let mut b = EchelonBasis::new(m.cols()).unwrap();
                rows.iter().filter(|&&r| {
                    let (next, grew) = b.insert_row(r);
                    b = next;
                    grew
                }).count()
            };
            prop_assert_eq!(count(&rows), m.rank());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for a in (1..rows.len()).rev() {
                rows.swap(a, rng.gen_range(0..=a));
            }
            prop_assert_eq!(count(&rows), m.rank());
        }

        #[test]
        fn pair_increase_matches_insertion(
            base in proptest::collection::vec(0u64..256, 0..6),
            a in 0u64..256,
            b in 0u64..256,
        ) {
            let mut basis = EchelonBasis::new(8).unwrap();
            for r in base {
                basis.push(r);
            }
            let mut ext = basis;
            let grew = usize::from(ext.push(a)) + usize::from(ext.push(b));
            prop_assert_eq!(basis.pair_increase(a, b), grew);
        }
    }
}
