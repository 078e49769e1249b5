//! Exact polynomials with rational coefficients.
//!
//! [`RatPoly`] is univariate. [`BiPoly`] is a polynomial in `Y = 2^n` whose
//! coefficients are [`RatPoly`]s in `X = 2^k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `2^e` for a possibly negative exponent.
pub fn pow2_rat(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow2(e as usize))
    } else {
        BigRational::new(BigInt::one(), pow2(e.unsigned_abs() as usize))
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Dense univariate polynomial; `coeffs[d]` multiplies `v^d`. Trailing zeros
/// are trimmed so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `v`.
    pub fn var() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> BigRational {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, v: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * v + c)
    }

    pub fn eval_int(&self, v: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(v.clone()))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Evaluates at an integer after clearing denominators; a non-integral
    /// value is an error.
    pub fn eval_integral(&self, v: &BigInt) -> Result<BigInt> {
        let den = self.denominator_lcm();
        let cleared: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let num = cleared
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * v + c);
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::NonIntegral(rat_string(&BigRational::new(num, den))));
        }
        Ok(q)
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|d| self.coeff(d) + rhs.coeff(d)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|d| self.coeff(d) - rhs.coeff(d)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("v"))
    }
}

impl RatPoly {
    /// Human-readable form, highest degree first, e.g. `2667/16*X - 39228`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = rat_string(&c.abs());
            match d {
                0 => out.push_str(&mag),
                _ => {
                    if mag != "1" {
                        out.push_str(&mag);
                        out.push('*');
                    }
                    out.push_str(var);
                    if d > 1 {
                        out.push_str(&format!("^{d}"));
                    }
                }
            }
        }
        out
    }
}

/// Polynomial in `Y` with coefficients in `Q[X]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    /// `by_y[d]` multiplies `Y^d`.
    by_y: Vec<RatPoly>,
}

impl BiPoly {
    pub fn new(mut by_y: Vec<RatPoly>) -> Self {
        while by_y.last().is_some_and(RatPoly::is_zero) {
            by_y.pop();
        }
        Self { by_y }
    }

    /// Lifts a polynomial in `Y` with constant (in `X`) coefficients.
    pub fn from_y(p: &RatPoly) -> Self {
        Self::new(p.coeffs().iter().cloned().map(RatPoly::constant).collect())
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.by_y.len().checked_sub(1)
    }

    /// Coefficient of `Y^d`, a polynomial in `X`.
    pub fn y_coeff(&self, d: usize) -> RatPoly {
        self.by_y.get(d).cloned().unwrap_or_default()
    }

    pub fn y_coeffs(&self) -> &[RatPoly] {
        &self.by_y
    }

    /// Substitutes `X = x`, leaving a polynomial in `Y`.
    pub fn subs_x(&self, x: &BigRational) -> RatPoly {
        RatPoly::new(self.by_y.iter().map(|p| p.eval(x)).collect())
    }

    /// Substitutes `Y = y`, leaving a polynomial in `X`.
    pub fn subs_y(&self, y: &BigRational) -> RatPoly {
        let mut acc = RatPoly::default();
        let mut power = BigRational::one();
        for p in &self.by_y {
            acc = &acc + &p.scale(&power);
            power *= y;
        }
        acc
    }

    /// Integer value at `X = 2^k`, `Y = 2^n`. `X` goes in first, then the
    /// denominators of the resulting `Y`-polynomial are cleared before `Y` is
    /// substituted.
    pub fn eval_pow2(&self, n: usize, k: usize) -> Result<BigInt> {
        let in_y = self.subs_x(&BigRational::from_integer(pow2(k)));
        in_y.eval_integral(&pow2(n))
    }

    pub fn mul_y(&self, p: &RatPoly) -> Self {
        let lifted = BiPoly::from_y(p);
        self * &lifted
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;

    fn add(self, rhs: &BiPoly) -> BiPoly {
        let len = self.by_y.len().max(rhs.by_y.len());
        BiPoly::new(
            (0..len)
                .map(|d| &self.y_coeff(d) + &rhs.y_coeff(d))
                .collect(),
        )
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;

    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let len = self.by_y.len().max(rhs.by_y.len());
        BiPoly::new(
            (0..len)
                .map(|d| &self.y_coeff(d) - &rhs.y_coeff(d))
                .collect(),
        )
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.by_y.is_empty() || rhs.by_y.is_empty() {
            return BiPoly::default();
        }
        let mut out = vec![RatPoly::default(); self.by_y.len() + rhs.by_y.len() - 1];
        for (i, a) in self.by_y.iter().enumerate() {
            for (j, b) in rhs.by_y.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, p) in self.by_y.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*Y^{d}", p.display("X"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = RatPoly::from_ints(&[1, 1]);
        let sq = &a * &a;
        assert_eq!(sq, RatPoly::from_ints(&[1, 2, 1]));
        assert_eq!(&sq - &sq, RatPoly::default());
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(RatPoly::default().degree(), None);
        assert_eq!(sq.eval(&int(3)), int(16));
    }

    #[test]
    fn integral_evaluation() {
        let p = RatPoly::new(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(p.eval_integral(&BigInt::from(3)).unwrap(), BigInt::from(2));
        assert!(matches!(
            p.eval_integral(&BigInt::from(2)),
            Err(Error::NonIntegral(s)) if s == "3/2"
        ));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_string(&rat(2667, 16)), "2667/16");
        assert_eq!(rat_string(&rat(-4, 2)), "-2");
        assert_eq!(parse_rat("-300301312/21"), Some(rat(-300301312, 21)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(pow2_rat(-3), rat(1, 8));
    }

    #[test]
    fn display() {
        let p = RatPoly::new(vec![int(-39228), rat(2667, 16)]);
        assert_eq!(p.display("X"), "2667/16*X - 39228");
        assert_eq!(RatPoly::from_ints(&[0, 0, -1]).display("Y"), "-Y^2");
    }

    #[test]
    fn bivariate_substitution_commutes() {
        // (X + 1) * Y^2 + (X/2) * Y
        let b = BiPoly::new(vec![
            RatPoly::default(),
            RatPoly::new(vec![int(0), rat(1, 2)]),
            RatPoly::from_ints(&[1, 1]),
        ]);
        let (x, y) = (int(4), int(8));
        assert_eq!(b.subs_x(&x).eval(&y), b.subs_y(&y).eval(&x));
        assert_eq!(b.eval_pow2(3, 2).unwrap(), BigInt::from(5 * 64 + 16));
    }
}
