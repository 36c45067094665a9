//! Expression trees over the surreal calculus atom set.
//!
//! An `Expr` is always handled in *canonical form*: fully distributed
//! sum-of-products, rational arithmetic folded, like terms combined, and
//! same-base powers merged. Equality of canonical forms is the kernel's
//! notion of identity, so every constructor that could disturb canonical
//! shape routes through [`canonicalize`].
//!
//! Atoms: rationals, named real constants, the surreal markers `w` (omega),
//! `W` (omega-one) and `dW(n)` (n-th derivative of omega-one), and free real
//! variables. Composite nodes: sums, products, powers, `exp`, `ln`, and the
//! gamma family.

mod antideriv;
mod canon;
mod diff;
mod json;
mod parse;
mod print;

pub use antideriv::{affine_in, antiderivative};
pub use canon::canonicalize;
pub use diff::{derive, diff};
pub use json::{expr_from_json, expr_to_json};
pub use parse::parse;

use crate::bernoulli::bernoulli_number;
use crate::error::{Error, Result};
use crate::rational::Rational;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedConstant {
    /// pi
    Pi,
    /// Euler's number e
    E,
    /// Euler-Mascheroni gamma
    EulerGamma,
    /// (1/2) ln(2 pi), the constant of Stirling's formula
    Ln2PiHalf,
    /// zeta(q) at a rational argument that does not reduce to a rational
    ZetaAt(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Rational(Rational),
    Constant(NamedConstant),
    /// omega, the numerosity of {1, 2, 3, ...}
    Omega,
    /// omega-one, the numerosity of [0, 1)
    Omega1,
    /// the n-th derivative of omega-one (opaque atoms; n >= 1)
    DOmega1(u32),
    /// free real variable (sequence index, integration variable, parameter)
    Var(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Gamma(Box<Expr>),
    LnGamma(Box<Expr>),
    Psi(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rational(Rational::int(n))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Rational(Rational::new(n, d))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn pi() -> Expr {
        Expr::Constant(NamedConstant::Pi)
    }

    pub fn euler_e() -> Expr {
        Expr::Constant(NamedConstant::E)
    }

    pub fn euler_gamma() -> Expr {
        Expr::Constant(NamedConstant::EulerGamma)
    }

    pub fn ln_2pi_half() -> Expr {
        Expr::Constant(NamedConstant::Ln2PiHalf)
    }

    /// `zeta(q)`. Non-positive integer arguments reduce to the classical
    /// rational values `zeta(-n) = (-1)^n B_{n+1}/(n+1)`; anything else stays
    /// a named constant.
    pub fn zeta_at(q: Rational) -> Expr {
        if q.is_integer() && !q.is_positive() {
            let n = (-q.to_i64().unwrap()) as usize;
            let b = bernoulli_number(n + 1);
            let val = &b / &Rational::int(n as i64 + 1);
            // zeta(-n) = (-1)^n B_{n+1}/(n+1); the sign only bites at n = 0, 1
            let val = if n % 2 == 1 { -val } else { val };
            return Expr::Rational(val);
        }
        Expr::Constant(NamedConstant::ZetaAt(q))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Expr::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Terms of a canonical sum (a non-sum is its own single term).
    pub fn terms(&self) -> &[Expr] {
        match self {
            Expr::Sum(ts) => ts,
            other => std::slice::from_ref(other),
        }
    }

    /// Factors of a canonical product (a non-product is its own factor).
    pub fn factors(&self) -> &[Expr] {
        match self {
            Expr::Product(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }

    /// Split a canonical term into its rational coefficient and the
    /// remaining factors.
    pub fn split_coeff(&self) -> (Rational, Vec<Expr>) {
        match self {
            Expr::Rational(r) => (r.clone(), Vec::new()),
            Expr::Product(fs) => match fs.first() {
                Some(Expr::Rational(r)) => (r.clone(), fs[1..].to_vec()),
                _ => (Rational::one(), fs.clone()),
            },
            other => (Rational::one(), vec![other.clone()]),
        }
    }

    /// Does any `w`, `W`, or `dW(n)` atom appear in the tree?
    pub fn contains_omega_family(&self) -> bool {
        self.any_node(&mut |e| {
            matches!(e, Expr::Omega | Expr::Omega1 | Expr::DOmega1(_))
        })
    }

    pub fn contains_var(&self, name: &str) -> bool {
        self.any_node(&mut |e| matches!(e, Expr::Var(v) if v == name))
    }

    pub fn any_node(&self, pred: &mut impl FnMut(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Sum(es) | Expr::Product(es) => es.iter().any(|e| e.any_node(pred)),
            Expr::Power(b, e) => b.any_node(pred) || e.any_node(pred),
            Expr::Exp(a) | Expr::Ln(a) | Expr::Gamma(a) | Expr::LnGamma(a) | Expr::Psi(a) => {
                a.any_node(pred)
            }
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Sum(es) | Expr::Product(es) => es.iter().for_each(|e| e.collect_vars(out)),
            Expr::Power(b, e) => {
                b.collect_vars(out);
                e.collect_vars(out);
            }
            Expr::Exp(a) | Expr::Ln(a) | Expr::Gamma(a) | Expr::LnGamma(a) | Expr::Psi(a) => {
                a.collect_vars(out)
            }
            _ => {}
        }
    }

    /// Replace every occurrence of `Var(name)` by `value`, re-canonicalizing.
    pub fn substitute(&self, name: &str, value: &Expr) -> Result<Expr> {
        let raw = self.substitute_raw(name, value);
        canonicalize(&raw)
    }

    /// Replace every occurrence of the atom `target` (a leaf such as `w`,
    /// `W`, or a variable) by `value`, re-canonicalizing.
    pub fn substitute_atom(&self, target: &Expr, value: &Expr) -> Result<Expr> {
        fn walk(e: &Expr, target: &Expr, value: &Expr) -> Expr {
            if e == target {
                return value.clone();
            }
            match e {
                Expr::Sum(es) => Expr::Sum(es.iter().map(|x| walk(x, target, value)).collect()),
                Expr::Product(es) => {
                    Expr::Product(es.iter().map(|x| walk(x, target, value)).collect())
                }
                Expr::Power(b, x) => Expr::Power(
                    Box::new(walk(b, target, value)),
                    Box::new(walk(x, target, value)),
                ),
                Expr::Exp(a) => Expr::Exp(Box::new(walk(a, target, value))),
                Expr::Ln(a) => Expr::Ln(Box::new(walk(a, target, value))),
                Expr::Gamma(a) => Expr::Gamma(Box::new(walk(a, target, value))),
                Expr::LnGamma(a) => Expr::LnGamma(Box::new(walk(a, target, value))),
                Expr::Psi(a) => Expr::Psi(Box::new(walk(a, target, value))),
                leaf => leaf.clone(),
            }
        }
        canonicalize(&walk(self, target, value))
    }

    pub fn substitute_raw(&self, name: &str, value: &Expr) -> Expr {
        match self {
            Expr::Var(v) if v == name => value.clone(),
            Expr::Sum(es) => Expr::Sum(es.iter().map(|e| e.substitute_raw(name, value)).collect()),
            Expr::Product(es) => {
                Expr::Product(es.iter().map(|e| e.substitute_raw(name, value)).collect())
            }
            Expr::Power(b, e) => Expr::Power(
                Box::new(b.substitute_raw(name, value)),
                Box::new(e.substitute_raw(name, value)),
            ),
            Expr::Exp(a) => Expr::Exp(Box::new(a.substitute_raw(name, value))),
            Expr::Ln(a) => Expr::Ln(Box::new(a.substitute_raw(name, value))),
            Expr::Gamma(a) => Expr::Gamma(Box::new(a.substitute_raw(name, value))),
            Expr::LnGamma(a) => Expr::LnGamma(Box::new(a.substitute_raw(name, value))),
            Expr::Psi(a) => Expr::Psi(Box::new(a.substitute_raw(name, value))),
            leaf => leaf.clone(),
        }
    }
}

/// `a + b` in canonical form.
pub fn add(a: &Expr, b: &Expr) -> Result<Expr> {
    canonicalize(&Expr::Sum(vec![a.clone(), b.clone()]))
}

pub fn add_all(terms: &[Expr]) -> Result<Expr> {
    canonicalize(&Expr::Sum(terms.to_vec()))
}

/// `a - b` in canonical form.
pub fn sub(a: &Expr, b: &Expr) -> Result<Expr> {
    let nb = neg(b)?;
    add(a, &nb)
}

/// `a * b` in canonical form.
pub fn mul(a: &Expr, b: &Expr) -> Result<Expr> {
    canonicalize(&Expr::Product(vec![a.clone(), b.clone()]))
}

pub fn mul_all(factors: &[Expr]) -> Result<Expr> {
    canonicalize(&Expr::Product(factors.to_vec()))
}

/// `a / b` in canonical form; `b` must not be the zero expression.
pub fn div(a: &Expr, b: &Expr) -> Result<Expr> {
    if b.is_zero() {
        return Err(Error::Pow("division by zero".into()));
    }
    let inv = pow(b, &Expr::int(-1))?;
    mul(a, &inv)
}

/// `a ^ b` in canonical form (`0^0 = 1` by kernel convention).
pub fn pow(a: &Expr, b: &Expr) -> Result<Expr> {
    canonicalize(&Expr::Power(Box::new(a.clone()), Box::new(b.clone())))
}

/// `-a` in canonical form.
pub fn neg(a: &Expr) -> Result<Expr> {
    mul(&Expr::int(-1), a)
}

/// `exp(a)` in canonical form.
pub fn exp(a: &Expr) -> Result<Expr> {
    canonicalize(&Expr::Exp(Box::new(a.clone())))
}

/// `ln(a)` in canonical form.
pub fn ln(a: &Expr) -> Result<Expr> {
    canonicalize(&Expr::Ln(Box::new(a.clone())))
}

pub fn sqrt(a: &Expr) -> Result<Expr> {
    pow(a, &Expr::rat(1, 2))
}
