//! Solution counts for the bilinear system over GF(2)[T]
//!
//! ```text
//! Y_1 U_j^(1) + Y_2 U_j^(2) + ... + Y_q U_j^(q) = 0,   j = 1..n
//! deg Y_i <= k - 1,  deg U_j^(i) <= 1
//! ```
//!
//! counted two ways: by trying every assignment, and by summing the kernel
//! size `2^{qk - rank}` of the linear map `Y -> (U Y)` over all `U`.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{rank_of_rows, MAX_COLS};

pub const BRUTEFORCE_LOG2_LIMIT: usize = 26;
pub const MARGINALIZED_LOG2_LIMIT: usize = 26;

/// Polynomial over GF(2); bit `d` is the coefficient of `T^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct F2Poly {
    bits: u64,
    bound: u8,
}

impl F2Poly {
    /// `bound` is the largest admissible degree (at most 63).
    pub fn new(bits: u64, bound: usize) -> Result<Self> {
        if bound >= 64 {
            return Err(Error::Width(bound + 1));
        }
        if bound < 63 && bits >> (bound + 1) != 0 {
            return Err(Error::RowOverflow {
                row: 0,
                cols: bound + 1,
            });
        }
        Ok(Self {
            bits,
            bound: bound as u8,
        })
    }

    pub fn zero(bound: usize) -> Self {
        Self::new(0, bound).expect("bound < 64")
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bound(&self) -> usize {
        usize::from(self.bound)
    }

    /// Actual degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        (self.bits != 0).then(|| 63 - self.bits.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

/// Carry-less product of two words. The caller keeps the result under 64 bits.
#[inline]
pub fn clmul(mut a: u64, b: u64) -> u64 {
    let mut acc = 0;
    let mut shift = 0;
    while a != 0 {
        if a & 1 == 1 {
            acc ^= b << shift;
        }
        a >>= 1;
        shift += 1;
    }
    acc
}

/// Product over GF(2); the degree bound of the result is the sum of bounds.
pub fn poly_mul(a: F2Poly, b: F2Poly) -> Result<F2Poly> {
    F2Poly::new(clmul(a.bits, b.bits), a.bound() + b.bound())
}

fn check_shape(q: usize, n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroWidth);
    }
    if q == 0 {
        return Err(Error::Unsupported {
            n,
            k,
            reason: "q must be at least 1".into(),
        });
    }
    Ok(())
}

/// Counts every `(Y, U)` assignment satisfying all `n` equations.
pub fn count_solutions_bruteforce(q: usize, n: usize, k: usize) -> Result<BigUint> {
    check_shape(q, n, k)?;
    let log2_cost = q * (k + 2 * n);
    if log2_cost > BRUTEFORCE_LOG2_LIMIT || k >= MAX_COLS {
        return Err(Error::Budget {
            what: "count_solutions_bruteforce",
            log2_cost,
            limit: BRUTEFORCE_LOG2_LIMIT,
        });
    }
    let y_mask = (1u64 << k) - 1;
    let u_bits = 2 * n * q;
    let count: u64 = (0u64..1 << u_bits)
        .into_par_iter()
        .map(|u| {
            let u_of = |i: usize, j: usize| (u >> (2 * (i * n + j))) & 3;
            let mut hits = 0u64;
            for y in 0u64..1 << (q * k) {
                let solves = (0..n).all(|j| {
                    (0..q).fold(0u64, |acc, i| {
                        acc ^ clmul((y >> (i * k)) & y_mask, u_of(i, j))
                    }) == 0
                });
                hits += u64::from(solves);
            }
            hits
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Matrix of `Y -> (sum_i U_j^(i) Y_i)_j` for one `U` assignment.
///
/// Row `j(k+1) + e` is the coefficient of `T^e` in equation `j`; column
/// `ik + d` is the coefficient of `T^d` in `Y_i`. `u` packs `U_j^(i)` into
/// bits `2(in + j)..2(in + j) + 2`.
pub fn solution_matrix_rows(q: usize, n: usize, k: usize, u: u64) -> Vec<u64> {
    let mut rows = vec![0u64; n * (k + 1)];
    for i in 0..q {
        for j in 0..n {
            let uij = (u >> (2 * (i * n + j))) & 3;
            for d in 0..k {
                let col = 1u64 << (i * k + d);
                for e in 0..2 {
                    if (uij >> e) & 1 == 1 {
                        rows[j * (k + 1) + d + e] |= col;
                    }
                }
            }
        }
    }
    rows
}

/// `sum_U 2^{qk - rank(M_U)}` over all `2^{2nq}` assignments of `U`.
pub fn count_solutions_marginalized(q: usize, n: usize, k: usize) -> Result<BigUint> {
    check_shape(q, n, k)?;
    let log2_cost = 2 * n * q;
    if log2_cost > MARGINALIZED_LOG2_LIMIT {
        return Err(Error::Budget {
            what: "count_solutions_marginalized",
            log2_cost,
            limit: MARGINALIZED_LOG2_LIMIT,
        });
    }
    if q * k > MAX_COLS {
        return Err(Error::Width(q * k));
    }
    let hist = (0u64..1 << log2_cost)
        .into_par_iter()
        .fold(
            || vec![0u64; q * k + 1],
            |mut hist, u| {
                let mut rows = solution_matrix_rows(q, n, k, u);
                hist[rank_of_rows(&mut rows)] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; q * k + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist
        .iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (r, &c)| {
            acc + (BigUint::from(c) << (q * k - r))
        }))
}
