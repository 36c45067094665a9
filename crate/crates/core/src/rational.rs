//! Exact rational arithmetic used throughout the kernel.
//!
//! `Rational` wraps `BigRational` and adds the handful of operations the
//! symbolic layer needs beyond plain field arithmetic: decimal-literal
//! parsing, perfect-power detection (for folding `r^(n/d)`), and the
//! content/square-part helpers behind canonical radical scaling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn numer_i64(&self) -> Option<i64> {
        self.0.numer().to_i64()
    }

    pub fn denom_i64(&self) -> Option<i64> {
        self.0.denom().to_i64()
    }

    /// Nearest f64 (lossy; for ordering heuristics only, never arithmetic).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    /// Exact integer power; `exp` may be negative for nonzero bases.
    pub fn pow_i64(&self, exp: i64) -> Self {
        if exp == 0 {
            return Rational::one(); // 0^0 = 1 by kernel convention
        }
        let e = exp.unsigned_abs().try_into().unwrap_or(i32::MAX as u32) as i32;
        let powed = self.0.pow(e);
        if exp < 0 {
            assert!(!self.is_zero(), "negative power of zero");
            Rational(powed.recip())
        } else {
            Rational(powed)
        }
    }

    /// `self^exp` when the result is again rational: integer exponents always
    /// (except negative powers of zero), fractional exponents only when the
    /// base is a perfect power of the required degree.
    pub fn checked_pow(&self, exp: &Rational) -> Option<Rational> {
        if exp.is_zero() {
            return Some(Rational::one());
        }
        if self.is_zero() {
            return if exp.is_negative() { None } else { Some(Rational::zero()) };
        }
        let n = exp.numer();
        let d = exp.denom();
        let base = if n.is_negative() { self.recip() } else { self.clone() };
        let n_abs = n.abs().to_u32()?;
        let powed = Rational(base.0.pow(n_abs.try_into().ok()?));
        let d = d.to_u32()?;
        if d == 1 {
            return Some(powed);
        }
        if powed.is_negative() && d % 2 == 0 {
            return None; // would leave the reals
        }
        let rn = perfect_root(powed.numer(), d)?;
        let rd = perfect_root(powed.denom(), d)?;
        Some(Rational::from_big(rn, rd))
    }

    /// Parse an exact decimal literal such as `12`, `0.5`, or `3.25`.
    pub fn parse_decimal(text: &str) -> Option<Rational> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits: String = [int_part, frac_part].concat();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let numer: BigInt = digits.parse().ok()?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Some(Rational::from_big(numer, denom))
    }

    /// Positive gcd of two rationals: gcd of numerators over lcm of
    /// denominators. `gcd(q, 0) = |q|`.
    pub fn gcd(&self, other: &Rational) -> Rational {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        let n = self.numer().gcd(other.numer());
        let d = self.denom().lcm(other.denom());
        Rational::from_big(n, d)
    }

    /// Decompose a positive rational as `(a/b)^2 * c` with `c` a squarefree
    /// positive integer, returning `(a/b, c)`. Used to pull the rational part
    /// out of a square root: `sqrt(self) = (a/b) * sqrt(c)`.
    pub fn sqrt_decompose(&self) -> (Rational, BigInt) {
        assert!(self.is_positive(), "sqrt of non-positive rational");
        // sqrt(p/q) = sqrt(p*q)/q
        let m = self.numer() * self.denom();
        let (s, c) = square_part(&m);
        (Rational::from_big(s, self.denom().clone()), c)
    }
}

/// Exact `d`-th root of a non-negative integer, if it is a perfect power.
fn perfect_root(n: &BigInt, d: u32) -> Option<BigInt> {
    if n.is_negative() {
        if d.is_multiple_of(2) {
            return None;
        }
        return perfect_root(&-n, d).map(|r| -r);
    }
    let root = n.nth_root(d);
    if num_traits::pow(root.clone(), d as usize) == *n {
        Some(root)
    } else {
        None
    }
}

/// Write `m = s^2 * c` with `c` having no square factor below the trial
/// bound, returning `(s, c)`. Trial division keeps this exact for the sizes
/// the kernel produces; a genuinely huge squarefull cofactor would merely be
/// left unextracted (still deterministic).
fn square_part(m: &BigInt) -> (BigInt, BigInt) {
    assert!(m.is_positive());
    let mut s = BigInt::one();
    let mut c = BigInt::one();
    let mut rest = m.clone();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(100_000u32);
    while &p * &p <= rest && p <= bound {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        if count > 0 {
            s *= num_traits::pow(p.clone(), (count / 2) as usize);
            if count % 2 == 1 {
                c *= &p;
            }
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    // rest is prime or has only factors above the bound; check for a square.
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            c *= rest;
        }
    }
    (s, c)
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}
