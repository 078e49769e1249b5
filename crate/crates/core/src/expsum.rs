//! Additive characters on GF(2)((1/T)) restricted to the unit interval, and
//! the exponential sum whose value is governed by the persymmetric rank.
//!
//! An element `t = sum_{i>=1} a_i T^{-i}` is only ever needed modulo
//! `T^{-(k+1)}`, so it is stored as its first `depth` coefficients.

use crate::error::{Error, Result};
use crate::persym::CoeffTuple;
use crate::polysys::{poly_mul, F2Poly};

pub const FK_LOG2_LIMIT: usize = 24;

/// Truncated tail of an element of the unit interval; bit `i - 1` is `a_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LaurentTail {
    bits: u64,
    depth: u8,
}

impl LaurentTail {
    pub fn new(bits: u64, depth: usize) -> Result<Self> {
        if depth == 0 || depth > 64 {
            return Err(Error::Width(depth));
        }
        if depth < 64 && bits >> depth != 0 {
            return Err(Error::RowOverflow {
                row: 0,
                cols: depth,
            });
        }
        Ok(Self {
            bits,
            depth: depth as u8,
        })
    }

    /// `T^{-i}` truncated at `depth`.
    pub fn monomial(i: usize, depth: usize) -> Result<Self> {
        if i == 0 || i > depth {
            return Err(Error::TailTooShort { degree: i, depth });
        }
        Self::new(1 << (i - 1), depth)
    }

    pub fn zero(depth: usize) -> Result<Self> {
        Self::new(0, depth)
    }

    pub fn depth(&self) -> usize {
        usize::from(self.depth)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Coefficient `a_i`, 1-based.
    pub fn coeff(&self, i: usize) -> bool {
        i >= 1 && i <= self.depth() && (self.bits >> (i - 1)) & 1 == 1
    }
}

/// One tail per block: block `j` of the tuple supplies `a_1..a_{k+1}`.
pub fn tails_from_tuple(t: &CoeffTuple) -> Vec<LaurentTail> {
    t.blocks()
        .iter()
        .map(|&b| LaurentTail::new(b, t.k() + 1).expect("block fits its tail depth"))
        .collect()
}

/// `E(t)`: `+1` when the coefficient of `T^{-1}` is 0, otherwise `-1`.
pub fn e_char(t: &LaurentTail) -> i8 {
    if t.coeff(1) {
        -1
    } else {
        1
    }
}

/// Product of `E` over the components.
pub fn psi_char(ts: &[LaurentTail]) -> i8 {
    ts.iter().map(e_char).product()
}

/// Coefficient of `T^{-1}` in `t · p`, that is `sum_d p_d a_{d+1}`.
pub fn residue_coeff(t: &LaurentTail, p: &F2Poly) -> Result<bool> {
    if let Some(degree) = p.degree() {
        if degree >= t.depth() {
            return Err(Error::TailTooShort {
                degree,
                depth: t.depth(),
            });
        }
    }
    Ok((p.bits() & t.bits).count_ones() & 1 == 1)
}

/// `sum_{deg Y <= k-1} prod_j sum_{deg U_j <= 1} E(t_j Y U_j)`, expanded
/// into its `2^{k+2n}` individual terms and summed one by one.
pub fn f_k_bruteforce(ts: &[LaurentTail], k: usize) -> Result<i64> {
    let n = ts.len();
    if k == 0 {
        return Err(Error::ZeroWidth);
    }
    let log2_cost = k + 2 * n;
    if log2_cost > FK_LOG2_LIMIT {
        return Err(Error::Budget {
            what: "f_k_bruteforce",
            log2_cost,
            limit: FK_LOG2_LIMIT,
        });
    }
    if let Some(t) = ts.iter().find(|t| t.depth() < k + 1) {
        return Err(Error::TailTooShort {
            degree: k,
            depth: t.depth(),
        });
    }
    let mut total = 0i64;
    for y in 0u64..1 << k {
        let y = F2Poly::new(y, k - 1)?;
        for u in 0u64..1 << (2 * n) {
            let mut sign = 1i64;
            for (j, t) in ts.iter().enumerate() {
                let uj = F2Poly::new((u >> (2 * j)) & 3, 1)?;
                if residue_coeff(t, &poly_mul(y, uj)?)? {
                    sign = -sign;
                }
            }
            total += sign;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_reads_only_the_first_coefficient() {
        assert_eq!(e_char(&LaurentTail::zero(4).unwrap()), 1);
        assert_eq!(e_char(&LaurentTail::monomial(1, 4).unwrap()), -1);
        assert_eq!(e_char(&LaurentTail::monomial(2, 4).unwrap()), 1);
    }

    #[test]
    fn psi_is_parity_of_first_coefficients() {
        let t1 = LaurentTail::monomial(1, 3).unwrap();
        let t2 = LaurentTail::monomial(2, 3).unwrap();
        let zero = LaurentTail::zero(3).unwrap();
        assert_eq!(psi_char(&[]), 1);
        assert_eq!(psi_char(&[t1, t1]), 1);
        assert_eq!(psi_char(&[t1, zero, t2]), -1);
    }

    #[test]
    fn residues() {
        let t = LaurentTail::new(0b1011, 4).unwrap();
        let one = F2Poly::new(1, 0).unwrap();
        assert_eq!(residue_coeff(&t, &one).unwrap(), t.coeff(1));
        for j in 0..4 {
            let tj = F2Poly::new(1 << j, 3).unwrap();
            assert_eq!(residue_coeff(&t, &tj).unwrap(), t.coeff(j + 1));
        }
        let both = LaurentTail::new(0b11, 2).unwrap();
        assert!(!residue_coeff(&both, &F2Poly::new(0b11, 1).unwrap()).unwrap());
        assert!(matches!(
            residue_coeff(&both, &F2Poly::new(0b100, 2).unwrap()),
            Err(Error::TailTooShort {
                degree: 2,
                depth: 2
            })
        ));
    }

    #[test]
    fn zero_tails_give_the_full_count() {
        for n in 0..=3 {
            for k in 1..=5 {
                let ts = vec![LaurentTail::zero(k + 1).unwrap(); n];
                assert_eq!(f_k_bruteforce(&ts, k).unwrap(), 1 << (2 * n + k));
            }
        }
    }

    #[test]
    fn single_unit_tail() {
        let t = CoeffTuple::from_bits(1, 3, &[1, 0, 0, 0]).unwrap();
        let rank = t.matrix().rank();
        let ts = tails_from_tuple(&t);
        assert_eq!(f_k_bruteforce(&ts, 3).unwrap(), 1 << (2 + 3 - rank));
    }

    #[test]
    fn guards() {
        let short = LaurentTail::zero(3).unwrap();
        assert!(f_k_bruteforce(&[short], 3).is_err());
        let ts = vec![LaurentTail::zero(11).unwrap(); 8];
        assert!(matches!(f_k_bruteforce(&ts, 10), Err(Error::Budget { .. })));
        assert!(LaurentTail::new(0b100, 2).is_err());
    }
}
