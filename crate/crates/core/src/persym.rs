//! The `2n × k` matrix family and its defining coefficient tuples.
//!
//! Block `j` (1-based) is determined by `k + 1` coefficients
//! `a_1..a_{k+1}`; its first row is `a_1..a_k` and its second row is
//! `a_2..a_{k+1}`. Tuple bit `(j-1)(k+1) + (i-1)` holds `a_i` of block `j`,
//! so a tuple index in little-endian order walks the last block slowest.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2::GF2Matrix;

/// Widest `k` for which a whole block (`k + 1` bits) fits in one word.
pub const MAX_K: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffTuple {
    n: usize,
    k: usize,
    /// One word per block, bit `i - 1` = coefficient `a_i`.
    blocks: Vec<u64>,
}

fn check_k(k: usize) -> Result<()> {
    match k {
        0 => Err(Error::ZeroWidth),
        k if k > MAX_K => Err(Error::Width(k)),
        _ => Ok(()),
    }
}

#[inline]
fn block_mask(k: usize) -> u64 {
    u64::MAX >> (63 - k)
}

/// The two rows of a block given its `k + 1` coefficient bits.
#[inline]
pub fn block_rows(block: u64, k: usize) -> (u64, u64) {
    let row_mask = (1u64 << k) - 1;
    (block & row_mask, (block >> 1) & row_mask)
}

impl CoeffTuple {
    /// Builds a tuple from per-block coefficient words.
    pub fn from_blocks(k: usize, blocks: Vec<u64>) -> Result<Self> {
        check_k(k)?;
        let mask = block_mask(k);
        if let Some(block) = blocks.iter().position(|b| b & !mask != 0) {
            return Err(Error::BlockOverflow { block, k });
        }
        Ok(Self {
            n: blocks.len(),
            k,
            blocks,
        })
    }

    /// Builds a tuple from a flat list of `n(k+1)` bits in storage order.
    pub fn from_bits(n: usize, k: usize, bits: &[u8]) -> Result<Self> {
        check_k(k)?;
        if bits.len() != n * (k + 1) {
            return Err(Error::TupleLength {
                expected: n * (k + 1),
                got: bits.len(),
            });
        }
        let blocks = bits
            .chunks(k + 1)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b & 1) << i))
            })
            .collect();
        Ok(Self { n, k, blocks })
    }

    pub fn zero(n: usize, k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self {
            n,
            k,
            blocks: vec![0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bit_len(&self) -> usize {
        self.n * (self.k + 1)
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Coefficient `a_i` of block `j`, both 1-based.
    pub fn alpha(&self, j: usize, i: usize) -> bool {
        assert!((1..=self.n).contains(&j) && (1..=self.k + 1).contains(&i));
        (self.blocks[j - 1] >> (i - 1)) & 1 == 1
    }

    /// Storage-order bit.
    pub fn bit(&self, idx: usize) -> bool {
        let (j, i) = (idx / (self.k + 1), idx % (self.k + 1));
        (self.blocks[j] >> i) & 1 == 1
    }

    /// Little-endian decomposition of `idx` into `n(k+1)` bits.
    pub fn from_index(idx: &BigUint, n: usize, k: usize) -> Result<Self> {
        check_k(k)?;
        let width = n * (k + 1);
        if idx.bits() as usize > width {
            return Err(Error::IndexOutOfRange {
                idx: idx.to_string(),
                n,
                k,
            });
        }
        let mask = BigUint::from(block_mask(k));
        let blocks = (0..n)
            .map(|j| {
                let word = (idx >> (j * (k + 1))) & &mask;
                word.iter_u64_digits().next().unwrap_or(0)
            })
            .collect();
        Ok(Self { n, k, blocks })
    }

    pub fn index(&self) -> BigUint {
        self.blocks.iter().rev().fold(BigUint::zero(), |acc, &b| {
            (acc << (self.k + 1)) | BigUint::from(b)
        })
    }

    /// The `2n × k` matrix of this tuple.
    pub fn matrix(&self) -> GF2Matrix {
        let rows = self
            .blocks
            .iter()
            .flat_map(|&b| {
                let (r1, r2) = block_rows(b, self.k);
                [r1, r2]
            })
            .collect();
        GF2Matrix::from_raw(self.k, rows)
    }
}

/// A tuple together with its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersymInstance {
    tuple: CoeffTuple,
    matrix: GF2Matrix,
}

impl PersymInstance {
    pub fn new(tuple: CoeffTuple) -> Self {
        let matrix = tuple.matrix();
        Self { tuple, matrix }
    }

    pub fn tuple(&self) -> &CoeffTuple {
        &self.tuple
    }

    pub fn matrix(&self) -> &GF2Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn build_matrix(t: &CoeffTuple) -> GF2Matrix {
    t.matrix()
}

pub fn tuple_from_index(idx: &BigUint, n: usize, k: usize) -> Result<CoeffTuple> {
    CoeffTuple::from_index(idx, n, k)
}

pub fn index_of(t: &CoeffTuple) -> BigUint {
    t.index()
}

/// Number of tuples, `2^{n(k+1)}`.
pub fn tuple_count(n: usize, k: usize) -> BigUint {
    BigUint::one() << (n * (k + 1))
}
