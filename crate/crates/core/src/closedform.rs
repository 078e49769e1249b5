//! Closed-form rank counts.
//!
//! General-width rows for ranks 0..=7 are bivariate in `X = 2^k` and
//! `Y = 2^n`, each asserted only from a minimum width on. The `k = 10`
//! table covers every rank 0..=10 as a polynomial in `Y`. Constants that are
//! conventionally written as `c·2^m` are entered that way and cross-checked
//! against plain integers in the tests.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::census::{max_rank, RankDistribution};
use crate::error::{Error, Result};
use crate::poly::{int, pow2, rat, BiPoly, RatPoly};

/// Highest rank with a general-width closed form.
pub const GENERAL_MAX_RANK: usize = 7;

/// `c · 2^m` as a rational.
fn shl(c: i64, m: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(c) * pow2(m))
}

fn xpoly(coeffs: Vec<BigRational>) -> RatPoly {
    RatPoly::new(coeffs)
}

/// One rank's formula with the smallest `k` it is asserted for.
#[derive(Clone, Debug)]
pub struct GammaFormula {
    pub rank: usize,
    pub min_k: usize,
    pub poly: BiPoly,
}

impl GammaFormula {
    pub fn eval(&self, n: usize, k: usize) -> Result<BigInt> {
        if k < self.min_k {
            return Err(Error::FormulaNotAsserted {
                rank: self.rank,
                k,
                min_k: self.min_k,
            });
        }
        self.poly.eval_pow2(n, k)
    }
}

#[derive(Debug)]
pub struct GammaFormulaTable {
    rows: Vec<GammaFormula>,
}

impl GammaFormulaTable {
    pub fn get(&self, rank: usize) -> Option<&GammaFormula> {
        self.rows.get(rank)
    }

    pub fn rows(&self) -> &[GammaFormula] {
        &self.rows
    }
}

/// The rank-7 row as a bivariate polynomial, Y-grouped.
pub fn gamma7_poly() -> BiPoly {
    BiPoly::new(vec![
        // g(k)
        xpoly(vec![
            -rat(293263, 21) * shl(1, 16),
            rat(20798464, 3),
            -rat(48608, 3),
            rat(248, 21),
        ]),
        // f(k)
        xpoly(vec![
            shl(1466315, 13) / int(7) + shl(11373, 13),
            int(-13600384),
            int(31310),
            rat(-155, 7),
        ]),
        // e(k)
        xpoly(vec![
            rat(-3534612736, 3),
            rat(26162884, 3),
            rat(-233585, 12),
            rat(155, 12),
        ]),
        // d(k)
        xpoly(vec![
            rat(2247886880, 7),
            rat(-4605205, 2),
            rat(231105, 48),
            rat(-465, 168),
        ]),
        // c(k)
        xpoly(vec![
            rat(-817168432, 21),
            rat(6262403, 24),
            rat(-45229, 96),
            rat(31, 168),
        ]),
        // b(k)
        xpoly(vec![int(2062014), rat(-190341, 16), rat(465, 32)]),
        // a(k)
        xpoly(vec![int(-43053), rat(2667, 16)]),
        xpoly(vec![int(255)]),
    ])
}

fn build_general() -> GammaFormulaTable {
    let c = |v: i64| xpoly(vec![int(v)]);
    let rows = vec![
        BiPoly::new(vec![c(1)]),
        BiPoly::new(vec![c(-3), c(3)]),
        BiPoly::new(vec![
            xpoly(vec![int(18), int(-2)]),
            xpoly(vec![int(-25), int(2)]),
            c(7),
        ]),
        BiPoly::new(vec![
            xpoly(vec![int(-176), int(14)]),
            xpoly(vec![int(294), int(-21)]),
            xpoly(vec![int(-133), int(7)]),
            c(15),
        ]),
        // 2^{2k+2} = 4X^2, 117·2^{k+2} = 468X
        BiPoly::new(vec![
            xpoly(vec![rat(9440, 3), rat(-468, 3), rat(4, 3)]),
            xpoly(vec![int(-5744), int(269), int(-2)]),
            xpoly(vec![rat(19028, 6), rat(-783, 6), rat(4, 6)]),
            xpoly(vec![rat(-1210, 2), rat(35, 2)]),
            c(31),
        ]),
        BiPoly::new(vec![
            xpoly(vec![int(-106752), int(2960), int(-20)]),
            xpoly(vec![int(203872), int(-5490), int(35)]),
            xpoly(vec![rat(-247520, 2), rat(6265, 2), rat(-35, 2)]),
            xpoly(vec![int(29150), rat(-2565, 4), rat(5, 2)]),
            xpoly(vec![int(-2573), rat(155, 4)]),
            c(63),
        ]),
        // 2^{k-3} = X/8, 2^{2k-3} = X^2/8, 2^{3k+3} = 8X^3
        BiPoly::new(vec![
            xpoly(vec![
                rat(18483200 * 8, 21),
                rat(-38816 * 8, 3),
                rat(163 * 8, 3),
                rat(-8, 21),
            ]),
            xpoly(vec![
                rat(-41276672, 3),
                rat(597736, 3),
                rat(-2437, 3),
                rat(2, 3),
            ]),
            xpoly(vec![
                int(8753120),
                rat(-368711, 3),
                rat(5649, 12),
                rat(-1, 3),
            ]),
            xpoly(vec![
                rat(-382091648, 168),
                rat(5026378, 168),
                rat(-16723, 168),
                rat(8, 168),
            ]),
            xpoly(vec![rat(748154, 3), rat(-22661, 8), rat(155, 24)]),
            xpoly(vec![int(-10605), rat(651, 8)]),
            c(127),
        ]),
        gamma7_poly(),
    ];
    GammaFormulaTable {
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(rank, poly)| GammaFormula {
                rank,
                min_k: rank + 1,
                poly,
            })
            .collect(),
    }
}

/// The general-width table, built once.
pub fn general_table() -> &'static GammaFormulaTable {
    static TABLE: OnceLock<GammaFormulaTable> = OnceLock::new();
    TABLE.get_or_init(build_general)
}

/// Number of rank-`i` matrices of width `k` with `n` blocks, for `i <= 7`.
/// Fails when `k` is below the row's validity threshold `i + 1`.
pub fn gamma_general(i: usize, n: usize, k: usize) -> Result<BigInt> {
    let row = general_table().get(i).ok_or_else(|| Error::Unsupported {
        n,
        k,
        reason: format!("no general-width formula for rank {i}"),
    })?;
    row.eval(n, k)
}

/// Rank-7 count for a fixed number of blocks `n <= 5`, as a polynomial in `X`.
pub fn gamma7_by_blocks(n: usize) -> Result<RatPoly> {
    match n {
        0..=3 => Ok(RatPoly::default()),
        4 => Ok(RatPoly::from_ints(&[-121896960, 13332480, -416640, 3720])),
        5 => Ok(
            RatPoly::new(vec![shl(311, 13), shl(-917, 7), int(1148), int(1)]).scale(&int(115320)),
        ),
        _ => Err(Error::Unsupported {
            n,
            k: 0,
            reason: "fixed-block rank-7 table covers n <= 5".into(),
        }),
    }
}

/// Rank-7 count for a fixed width `k` in `{8, 9}`, as a polynomial in `Y`.
pub fn gamma7_by_width(k: usize) -> Result<RatPoly> {
    match k {
        8 => Ok(RatPoly::from_ints(&[
            -4128768, 7913472, -4617984, 758880, 105648, -31122, -381, 255,
        ])),
        9 => Ok(RatPoly::from_ints(&[
            -27983872, 81543168, -82168576, 32840160, -4053808, -219618, 42291, 255,
        ])),
        _ => Err(Error::Unsupported {
            n: 0,
            k,
            reason: "fixed-width rank-7 table covers k in {8, 9}".into(),
        }),
    }
}

/// Rank-7 count from the special-case tables: the fixed-block table when
/// `n <= 5`, otherwise the fixed-width table. For `n` in 4..=5 the
/// fixed-block expressions are only taken for `k >= 8`.
pub fn gamma7_special(n: usize, k: usize) -> Result<BigInt> {
    if n <= 3 {
        return Ok(BigInt::zero());
    }
    if n <= 5 && k >= 8 {
        return gamma7_by_blocks(n)?.eval_integral(&pow2(k));
    }
    gamma7_by_width(k)?.eval_integral(&pow2(n))
}

fn build_k10() -> Vec<RatPoly> {
    let ints = |c: &[i64]| RatPoly::from_ints(c);
    vec![
        ints(&[1]),
        ints(&[-3, 3]),
        ints(&[-2030, 2023, 7]),
        ints(&[14160, -21210, 7035, 15]),
        ints(&[1241504, -1827440, 568590, 17315, 31]),
        ints(&[-18047232, 31282272, -15266160, 1993950, 37107, 63]),
        ints(&[
            -52215808, 54302976, 18602976, -24883824, 4120830, 72723, 127,
        ]),
        ints(&[
            1874657280,
            -3062415360,
            1210256640,
            39863520,
            -67607280,
            5117310,
            127635,
            255,
        ]),
        RatPoly::new(vec![
            shl(-4445, 21),
            shl(242795, 16),
            shl(-436135, 14),
            int(271514880),
            int(323250144),
            int(-38376240),
            int(-897890),
            int(171955),
            int(511),
        ]),
        RatPoly::new(vec![
            shl(480, 25),
            shl(-106680, 18),
            shl(200235, 16),
            int(-783237120),
            int(-559464192),
            int(78214752),
            int(1798320),
            int(-517650),
            int(-1533),
            int(1023),
        ]),
        RatPoly::new(vec![
            shl(-256, 25),
            shl(57344, 18),
            shl(-27432, 18),
            int(494731264),
            int(299663360),
            int(-45028608),
            int(-1028192),
            int(345440),
            int(1022),
            int(-1023),
            int(0),
            int(1),
        ]),
    ]
}

/// Rank counts at width 10 as polynomials in `Y = 2^n`, ranks 0..=10.
pub fn k10_table() -> &'static [RatPoly] {
    static TABLE: OnceLock<Vec<RatPoly>> = OnceLock::new();
    TABLE.get_or_init(build_k10)
}

/// Number of rank-`i` `2n × 10` matrices. Ranks above 10 give 0.
pub fn gamma_k10(i: usize, n: usize) -> BigInt {
    match k10_table().get(i) {
        Some(p) => p
            .eval_integral(&pow2(n))
            .expect("width-10 table has integer coefficients"),
        None => BigInt::zero(),
    }
}

/// The full rank distribution from closed forms, when every rank up to
/// `min(2n, k)` is covered: always for `k = 10`, otherwise only when
/// `2n < k` and `2n <= 7`.
pub fn closedform_distribution(n: usize, k: usize) -> Result<RankDistribution> {
    let top = max_rank(n, k);
    let values: Vec<BigInt> = if k == 10 {
        (0..=top).map(|i| gamma_k10(i, n)).collect()
    } else if top <= GENERAL_MAX_RANK && top < k {
        (0..=top)
            .map(|i| gamma_general(i, n, k))
            .collect::<Result<_>>()?
    } else {
        return Err(Error::Unsupported {
            n,
            k,
            reason: "closed forms cover k = 10, or 2n < k with 2n <= 7".into(),
        });
    };
    let counts = values
        .into_iter()
        .map(|v| {
            if v.is_negative() {
                Err(Error::Inconsistent(format!("negative rank count {v}")))
            } else {
                Ok(v.to_biguint().expect("non-negative"))
            }
        })
        .collect::<Result<Vec<BigUint>>>()?;
    RankDistribution::new(n, k, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn listed_values() {
        assert_eq!(gamma_general(0, 5, 3).unwrap(), big(1));
        assert_eq!(gamma_general(1, 2, 10).unwrap(), big(9));
        assert_eq!(gamma_general(2, 1, 10).unwrap(), big(2044));
        assert_eq!(gamma_general(4, 2, 10).unwrap(), big(4145280));
        assert_eq!(gamma_general(7, 3, 9).unwrap(), big(0));
        assert_eq!(gamma_k10(3, 2), big(42840));
    }

    #[test]
    fn thresholds_are_enforced() {
        assert_eq!(
            gamma_general(7, 3, 7),
            Err(Error::FormulaNotAsserted {
                rank: 7,
                k: 7,
                min_k: 8
            })
        );
        assert!(matches!(
            gamma_general(2, 1, 2),
            Err(Error::FormulaNotAsserted { .. })
        ));
        assert!(matches!(
            gamma_general(8, 1, 10),
            Err(Error::Unsupported { .. })
        ));
        assert!(gamma_general(0, 0, 1).is_ok());
    }

    #[test]
    fn rank7_special_tables() {
        let k8 = gamma7_by_width(8).unwrap();
        assert_eq!(k8.coeff(7), int(255));
        assert_eq!(k8.coeff(6), int(-381));
        for k in 1..=12 {
            assert_eq!(gamma7_special(2, k).unwrap(), big(0));
        }
        assert_eq!(
            gamma7_special(4, 9).unwrap(),
            gamma_general(7, 4, 9).unwrap()
        );
        assert!(gamma7_special(6, 10).is_err());
        assert!(gamma7_by_blocks(6).is_err());
    }

    #[test]
    fn fixed_block_rank7_vanishes_at_widths_5_and_6() {
        // a 2n × k matrix with k <= 6 cannot reach rank 7; the expressions
        // do not vanish at k = 3, so they are not used below k = 8
        for n in [4, 5] {
            let p = gamma7_by_blocks(n).unwrap();
            assert!(!p.eval_integral(&pow2(3)).unwrap().is_zero());
            for k in 5..=6 {
                assert_eq!(p.eval_integral(&pow2(k)).unwrap(), big(0), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn k10_rank_bound() {
        assert_eq!(gamma_k10(10, 0), big(0));
        assert_eq!(gamma_k10(8, 1), big(0));
        assert_eq!(gamma_k10(11, 3), big(0));
        assert_eq!(gamma_k10(6, 3), gamma_general(6, 3, 10).unwrap());
    }

    #[test]
    fn powers_of_two_match_plain_integers() {
        let plain = |p: &RatPoly, d: usize| p.coeff(d).to_integer();
        let t = k10_table();
        assert_eq!(plain(&t[8], 2), big(-7145635840));
        assert_eq!(plain(&t[8], 1), big(15911813120));
        assert_eq!(plain(&t[8], 0), big(-9321840640));
        assert_eq!(plain(&t[9], 2), big(13122600960));
        assert_eq!(plain(&t[9], 1), big(-27965521920));
        assert_eq!(plain(&t[9], 0), big(16106127360));
        assert_eq!(plain(&t[10], 2), big(-7191134208));
        assert_eq!(plain(&t[10], 1), big(15032385536));
        assert_eq!(plain(&t[10], 0), big(-8589934592));
        let g7 = gamma7_poly();
        assert_eq!(g7.y_coeff(1).coeff(0), rat(12664225792, 7));
        assert_eq!(g7.y_coeff(0).coeff(0), rat(-19219283968, 21));
    }

    /// Second transcription of the rank-7 row, grouped by powers of X.
    fn gamma7_x_grouped() -> BiPoly {
        let y = |c: &[i64], s: BigRational| BiPoly::from_y(&RatPoly::from_ints(c).scale(&s));
        let xpow = |e: usize| {
            let mut c = vec![int(0); e + 1];
            c[e] = int(1);
            BiPoly::new(vec![RatPoly::new(c)])
        };
        let x3 = &y(&[64, -120, 70, -15, 1], rat(31, 168)) * &xpow(3);
        let x2 = &y(
            &[-1555456, 3005760, -1868680, 462210, -45229, 1395],
            rat(1, 96),
        ) * &xpow(2);
        let x1 = &y(
            &[
                332775424, -652818432, 418606144, -110524920, 12524806, -571023, 8001,
            ],
            rat(1, 48),
        ) * &xpow(1);
        let x0 = BiPoly::from_y(
            &RatPoly::new(vec![
                -shl(293263, 16),
                shl(4637778, 13),
                -shl(96649567, 8),
                int(6743660640),
                int(-817168432),
                int(43302294),
                int(-904113),
                int(5355),
            ])
            .scale(&rat(1, 21)),
        );
        &(&(&x3 + &x2) + &x1) + &x0
    }

    #[test]
    fn rank7_row_matches_x_grouped_transcription() {
        assert_eq!(gamma7_poly(), gamma7_x_grouped());
    }

    #[test]
    fn general_rows_match_k10_rows() {
        let x = BigRational::from_integer(pow2(10));
        for i in 0..=GENERAL_MAX_RANK {
            let row = &general_table().get(i).unwrap().poly;
            assert_eq!(row.subs_x(&x), k10_table()[i], "rank {i}");
        }
    }

    #[test]
    fn integrality_and_sign() {
        for i in 0..=GENERAL_MAX_RANK {
            for n in 0..=12 {
                for k in i + 1..=20 {
                    let v = gamma_general(i, n, k).unwrap();
                    assert!(!v.is_negative(), "i={i} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn closedform_distribution_coverage() {
        let d = closedform_distribution(2, 10).unwrap();
        assert_eq!(d.counts.len(), 5);
        assert!(d.is_consistent());
        assert!(closedform_distribution(3, 8).unwrap().is_consistent());
        assert!(closedform_distribution(2, 4).is_err());
        assert!(closedform_distribution(4, 9).is_err());
    }
}
