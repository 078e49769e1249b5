//! Re-derivation of interpolated rank formulas with exact linear algebra.
//!
//! Two fits are reproduced. The general-width rank-7 row is recovered from
//! the fixed-width (`k = 8, 9`) and fixed-block (`n = 4, 5`) special cases,
//! assuming it vanishes at `n = 0..=3`. The width-10 rows for ranks 8, 9, 10
//! are recovered by matching every power of `Y` in the three width-10
//! weighted-sum identities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::closedform::{gamma7_by_blocks, gamma7_by_width, general_table, GENERAL_MAX_RANK};
use crate::error::{Error, Result};
use crate::poly::{int, pow2, BiPoly, RatPoly};

/// Dense system `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLinearSystem {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub unknowns: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<BigRational>),
    /// Consistent but with free unknowns.
    Underdetermined {
        rank: usize,
    },
    /// Equation `equation` (original index) cannot be satisfied.
    Inconsistent {
        equation: usize,
    },
}

impl RationalLinearSystem {
    pub fn new(unknowns: usize) -> Self {
        Self {
            a: Vec::new(),
            b: Vec::new(),
            unknowns,
        }
    }

    pub fn push(&mut self, row: Vec<BigRational>, rhs: BigRational) {
        assert_eq!(row.len(), self.unknowns, "row length");
        self.a.push(row);
        self.b.push(rhs);
    }

    pub fn equations(&self) -> usize {
        self.a.len()
    }

    /// `A x == b` exactly.
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, rhs)| {
            row.iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (c, v)| acc + c * v)
                == *rhs
        })
    }
}

/// Scales a rational row to coprime integers.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    primitive(ints)
}

fn primitive(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|c| *c /= &g);
    }
    row
}

/// Solves with fraction-free elimination on integer rows (each row scaled to
/// integers, combinations by cross-multiplication, content divided out), then
/// back-substitution over the rationals. Never approximates.
pub fn solve_exact(sys: &RationalLinearSystem) -> SolveOutcome {
    let m = sys.unknowns;
    let mut rows: Vec<(usize, Vec<BigInt>)> = sys
        .a
        .iter()
        .zip(&sys.b)
        .enumerate()
        .map(|(idx, (row, rhs))| {
            let mut aug = row.clone();
            aug.push(rhs.clone());
            (idx, integer_row(&aug))
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].1[col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].1.clone();
        for (_, row) in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            let pv = &pivot_row[col];
            let combined: Vec<BigInt> = row
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| x * pv - y * &f)
                .collect();
            *row = primitive(combined);
        }
        pivots.push(col);
        r += 1;
    }

    if let Some((idx, _)) = rows[r..].iter().find(|(_, row)| !row[m].is_zero()) {
        return SolveOutcome::Inconsistent { equation: *idx };
    }
    if r < m {
        return SolveOutcome::Underdetermined { rank: r };
    }

    let mut x = vec![BigRational::zero(); m];
    for (i, &col) in pivots.iter().enumerate().rev() {
        let row = &rows[i].1;
        let mut acc = BigRational::from_integer(row[m].clone());
        for c in col + 1..m {
            acc -= BigRational::from_integer(row[c].clone()) * &x[c];
        }
        x[col] = acc / BigRational::from_integer(row[col].clone());
    }
    SolveOutcome::Unique(x)
}

/// Polynomial of a given degree whose coefficients are either pinned or
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzPoly {
    pub degree: usize,
    pub pinned: BTreeMap<usize, BigRational>,
}

impl AnsatzPoly {
    pub fn new(degree: usize, pinned: &[(usize, i64)]) -> Self {
        Self {
            degree,
            pinned: pinned.iter().map(|&(d, c)| (d, int(c))).collect(),
        }
    }

    /// Degrees not pinned, ascending.
    pub fn unknown_degrees(&self) -> Vec<usize> {
        (0..=self.degree)
            .filter(|d| !self.pinned.contains_key(d))
            .collect()
    }

    /// Fills the unknowns (in [`Self::unknown_degrees`] order).
    pub fn assemble(&self, values: &[BigRational]) -> RatPoly {
        let unknown = self.unknown_degrees();
        assert_eq!(unknown.len(), values.len());
        let mut coeffs = vec![BigRational::zero(); self.degree + 1];
        for (d, c) in &self.pinned {
            coeffs[*d] = c.clone();
        }
        for (d, v) in unknown.into_iter().zip(values) {
            coeffs[d] = v.clone();
        }
        RatPoly::new(coeffs)
    }
}

/// `prod_{m=0}^{count-1} (Y - 2^m)`.
fn vanishing_poly(count: usize) -> RatPoly {
    (0..count).fold(RatPoly::from_ints(&[1]), |acc, m| {
        &acc * &RatPoly::new(vec![
            -BigRational::from_integer(pow2(m)),
            BigRational::one(),
        ])
    })
}

fn solve_unique(sys: &RationalLinearSystem, what: &str) -> Result<Vec<BigRational>> {
    match solve_exact(sys) {
        SolveOutcome::Unique(x) => Ok(x),
        SolveOutcome::Underdetermined { rank } => Err(Error::Inconsistent(format!(
            "{what}: rank {rank} < {} unknowns",
            sys.unknowns
        ))),
        SolveOutcome::Inconsistent { equation } => Err(Error::Inconsistent(format!(
            "{what}: equation {equation} fails"
        ))),
    }
}

/// Fitted rank-7 row: `Gamma_7 = (Y-1)(Y-2)(Y-4)(Y-8) (255 Y^3 + alpha Y^2 + beta Y + gamma)`
/// with `alpha, beta, gamma` polynomials in `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma7Fit {
    pub alpha: RatPoly,
    pub beta: RatPoly,
    pub gamma: RatPoly,
    /// `a(k)..g(k)`: the coefficients of `Y^6` down to `Y^0`.
    pub coeffs: [RatPoly; 7],
    pub poly: BiPoly,
}

/// Recovers the rank-7 row from the special-case tables.
pub fn fit_gamma7() -> Result<Gamma7Fit> {
    const LEADING: i64 = 255;
    let vanish = vanishing_poly(4);

    // a(k) = a·X + b from the Y^6 coefficients at k = 8, 9
    let mut sys = RationalLinearSystem::new(2);
    for k in [8usize, 9] {
        let row = gamma7_by_width(k)?;
        sys.push(
            vec![BigRational::from_integer(pow2(k)), int(1)],
            row.coeff(6),
        );
    }
    let ab = solve_unique(&sys, "a(k)")?;
    let a_of_k = RatPoly::new(vec![ab[1].clone(), ab[0].clone()]);
    // Y^6 coefficient of the product is alpha + 255·vanish[3]
    let alpha = &a_of_k - &RatPoly::constant(int(LEADING) * vanish.coeff(3));

    // Y·beta + gamma = G_n(X)/vanish(Y) - 255 Y^3 - alpha Y^2 at Y = 16, 32,
    // with beta and gamma cubic in X
    const CUBIC: usize = 4;
    let mut sys = RationalLinearSystem::new(2 * CUBIC);
    for n in [4usize, 5] {
        let y = BigRational::from_integer(pow2(n));
        let scale = vanish.eval(&y);
        let rhs = &(&gamma7_by_blocks(n)?.scale(&(BigRational::one() / scale))
            - &RatPoly::constant(int(LEADING) * &y * &y * &y))
            - &alpha.scale(&(&y * &y));
        if rhs.degree().unwrap_or(0) >= CUBIC {
            return Err(Error::Inconsistent(format!(
                "fixed-block input at n = {n} has degree above 3 in X"
            )));
        }
        for e in 0..CUBIC {
            let mut row = vec![BigRational::zero(); 2 * CUBIC];
            row[e] = y.clone();
            row[CUBIC + e] = int(1);
            sys.push(row, rhs.coeff(e));
        }
    }
    let bg = solve_unique(&sys, "beta, gamma")?;
    let beta = RatPoly::new(bg[..CUBIC].to_vec());
    let gamma = RatPoly::new(bg[CUBIC..].to_vec());

    let cofactor = BiPoly::new(vec![
        gamma.clone(),
        beta.clone(),
        alpha.clone(),
        RatPoly::constant(int(LEADING)),
    ]);
    let poly = cofactor.mul_y(&vanish);

    // the fixed-width inputs carry more than the Y^6 coefficient used above
    for k in [8usize, 9] {
        if poly.subs_x(&BigRational::from_integer(pow2(k))) != gamma7_by_width(k)? {
            return Err(Error::Inconsistent(format!(
                "fitted rank-7 row disagrees with the k = {k} table"
            )));
        }
    }

    let coeffs = std::array::from_fn(|i| poly.y_coeff(6 - i));
    Ok(Gamma7Fit {
        alpha,
        beta,
        gamma,
        coeffs,
        poly,
    })
}

/// Fitted width-10 rows for ranks 8, 9, 10.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K10Fit {
    pub ansatz: [AnsatzPoly; 3],
    /// Polynomials in `Y` for ranks 8, 9, 10.
    pub rows: [RatPoly; 3],
    pub equations: usize,
    pub unknowns: usize,
    pub consistent: bool,
}

impl K10Fit {
    /// `a_d^{(rank)}`, the coefficient of `Y^d` in the rank row.
    pub fn coeff(&self, rank: usize, d: usize) -> BigRational {
        self.rows[rank - 8].coeff(d)
    }
}

pub const K10_IDENTITY_NAMES: [&str; 3] = [
    "width-10 total",
    "width-10 first weighted sum",
    "width-10 second weighted sum",
];

/// Solves for the unknown coefficients of the rank 8, 9, 10 rows at width 10.
///
/// Ranks 0..=7 come from the general-width table at `X = 2^10`. Each of the
/// three weighted-sum identities is a polynomial identity in `Y`; equating
/// coefficients of `Y^0..Y^11` gives 36 equations in 26 unknowns.
pub fn fit_k10_high_ranks() -> Result<K10Fit> {
    const DEGREES: usize = 12;
    let x = BigRational::from_integer(pow2(10));
    let known: Vec<RatPoly> = (0..=GENERAL_MAX_RANK)
        .map(|i| general_table().get(i).expect("row").poly.subs_x(&x))
        .collect();
    let ansatz = [
        AnsatzPoly::new(8, &[(8, 511)]),
        AnsatzPoly::new(9, &[(9, 1023)]),
        AnsatzPoly::new(11, &[(11, 1), (10, 0), (9, -1023)]),
    ];
    let offsets: Vec<usize> = ansatz
        .iter()
        .scan(0, |acc, a| {
            let start = *acc;
            *acc += a.unknown_degrees().len();
            Some(start)
        })
        .collect();
    let unknowns: usize = ansatz.iter().map(|a| a.unknown_degrees().len()).sum();

    // weight of rank i in identity l is 2^{l(10 - i)}
    let weight = |l: usize, i: usize| BigRational::from_integer(pow2(l * (10 - i)));
    let rhs_polys = [
        RatPoly::from_bigints(&{
            let mut c = vec![BigInt::zero(); DEGREES];
            c[11] = BigInt::one();
            c
        }),
        {
            let mut c = vec![BigInt::zero(); DEGREES];
            c[11] = BigInt::one();
            c[9] = BigInt::from(1023);
            RatPoly::from_bigints(&c)
        },
        {
            let mut c = vec![BigInt::zero(); DEGREES];
            c[11] = BigInt::one();
            c[9] = BigInt::from(3069);
            c[8] = BigInt::from(3066);
            c[7] = BigInt::from(1042440);
            RatPoly::from_bigints(&c)
        },
    ];

    let mut sys = RationalLinearSystem::new(unknowns);
    for (l, rhs_poly) in rhs_polys.iter().enumerate() {
        for d in 0..DEGREES {
            let mut rhs = rhs_poly.coeff(d);
            for (i, p) in known.iter().enumerate() {
                rhs -= weight(l, i) * p.coeff(d);
            }
            let mut row = vec![BigRational::zero(); unknowns];
            for (slot, a) in ansatz.iter().enumerate() {
                let rank = 8 + slot;
                if let Some(c) = a.pinned.get(&d) {
                    rhs -= weight(l, rank) * c;
                } else if d <= a.degree {
                    let pos = a
                        .unknown_degrees()
                        .iter()
                        .position(|&u| u == d)
                        .expect("unknown");
                    row[offsets[slot] + pos] = weight(l, rank);
                }
            }
            sys.push(row, rhs);
        }
    }

    let solution = match solve_exact(&sys) {
        SolveOutcome::Unique(x) => x,
        SolveOutcome::Inconsistent { equation } => {
            return Err(Error::Inconsistent(format!(
                "{} at Y^{}",
                K10_IDENTITY_NAMES[equation / DEGREES],
                equation % DEGREES
            )))
        }
        SolveOutcome::Underdetermined { rank } => {
            return Err(Error::Inconsistent(format!(
                "width-10 fit has rank {rank} < {unknowns}"
            )))
        }
    };
    debug_assert!(sys.satisfied_by(&solution));

    let rows = std::array::from_fn(|slot| {
        let len = ansatz[slot].unknown_degrees().len();
        ansatz[slot].assemble(&solution[offsets[slot]..offsets[slot] + len])
    });
    Ok(K10Fit {
        ansatz,
        rows,
        equations: sys.equations(),
        unknowns,
        consistent: true,
    })
}

/// True when all coefficients of a polynomial are integers.
pub fn has_integer_coeffs(p: &RatPoly) -> bool {
    p.coeffs().iter().all(|c| c.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{gamma7_poly, k10_table};
    use crate::poly::rat;

    #[test]
    fn identity_system() {
        let mut sys = RationalLinearSystem::new(3);
        for i in 0..3 {
            let mut row = vec![int(0); 3];
            row[i] = int(1);
            sys.push(row, rat(i as i64 + 1, 7));
        }
        assert_eq!(
            solve_exact(&sys),
            SolveOutcome::Unique(vec![rat(1, 7), rat(2, 7), rat(3, 7)])
        );
    }

    #[test]
    fn two_by_two() {
        let mut sys = RationalLinearSystem::new(2);
        sys.push(vec![int(256), int(1)], int(-381));
        sys.push(vec![int(512), int(1)], int(42291));
        assert_eq!(
            solve_exact(&sys),
            SolveOutcome::Unique(vec![rat(2667, 16), int(-43053)])
        );
    }

    #[test]
    fn contradiction_and_deficiency() {
        let mut sys = RationalLinearSystem::new(1);
        sys.push(vec![int(1)], int(2));
        sys.push(vec![int(0)], int(1));
        assert_eq!(
            solve_exact(&sys),
            SolveOutcome::Inconsistent { equation: 1 }
        );

        let mut sys = RationalLinearSystem::new(2);
        sys.push(vec![int(1), int(1)], int(2));
        sys.push(vec![int(2), int(2)], int(4));
        assert_eq!(solve_exact(&sys), SolveOutcome::Underdetermined { rank: 1 });
    }

    #[test]
    fn overdetermined_consistent() {
        let mut sys = RationalLinearSystem::new(2);
        sys.push(vec![rat(1, 2), int(1)], int(3));
        sys.push(vec![int(1), int(-1)], int(0));
        sys.push(vec![int(3), int(1)], int(8));
        assert_eq!(
            solve_exact(&sys),
            SolveOutcome::Unique(vec![int(2), int(2)])
        );
    }

    #[test]
    fn gamma7_fit_values() {
        let fit = fit_gamma7().unwrap();
        assert_eq!(fit.alpha, RatPoly::new(vec![int(-39228), rat(2667, 16)]));
        assert_eq!(
            fit.gamma,
            RatPoly::new(vec![
                rat(-300301312, 21),
                rat(324976, 3),
                rat(-1519, 6),
                rat(31, 168)
            ])
        );
        assert_eq!(fit.poly, gamma7_poly());
        assert_eq!(
            fit.poly.eval_pow2(4, 8).unwrap(),
            gamma7_by_blocks(4)
                .unwrap()
                .eval_integral(&pow2(8))
                .unwrap()
        );
    }

    #[test]
    fn k10_fit_values() {
        let fit = fit_k10_high_ranks().unwrap();
        assert_eq!((fit.equations, fit.unknowns), (36, 26));
        assert_eq!(fit.coeff(8, 7), int(171955));
        assert_eq!(
            fit.coeff(10, 0),
            BigRational::from_integer(BigInt::from(-256) << 25)
        );
        for n in 1..=4 {
            assert_eq!(fit.rows[1].eval_integral(&pow2(n)).unwrap(), BigInt::zero());
        }
        for (slot, row) in fit.rows.iter().enumerate() {
            assert_eq!(row, &k10_table()[8 + slot]);
            assert!(has_integer_coeffs(row));
        }
    }

    #[test]
    fn ansatz_keeps_pins() {
        let a = AnsatzPoly::new(3, &[(3, 5), (1, 0)]);
        assert_eq!(a.unknown_degrees(), vec![0, 2]);
        let p = a.assemble(&[int(7), int(9)]);
        assert_eq!(p, RatPoly::from_ints(&[7, 0, 9, 5]));
    }
}
