//! The multiplicative skeleton of a transmonomial.
//!
//! A monomial is `B^(eexp*w) * w^wexp * ln(w)^lexp * W^w1exp * prod dW(n)^j`
//! with `B` either Euler's `e` or a rational base > 1. Growth comparison is
//! total on the germ axes (exponential beats power beats log); the continuum
//! axis (`W`, `dW`) is compared only when the germ axes agree or both axes
//! point the same way — the kernel refuses to rank, say, `W/w` against `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use surreal_core::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// exponential base: `None` is Euler's e, `Some(b)` a rational b > 1
    pub ebase: Option<Rational>,
    /// multiple of `w` in the exponential's argument
    pub eexp: Rational,
    /// exponent of `w`
    pub wexp: Rational,
    /// exponent of `ln w` (integer: fractional log powers never arise)
    pub lexp: i64,
    /// exponent of `W`
    pub w1exp: Rational,
    /// exponents of the opaque derivatives `dW(n)`
    pub dw1: BTreeMap<u32, i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Infinite,
    Unit,
    Infinitesimal,
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial::default()
    }

    pub fn omega(q: Rational) -> Monomial {
        Monomial {
            wexp: q,
            ..Monomial::default()
        }
    }

    pub fn log(m: i64) -> Monomial {
        Monomial {
            lexp: m,
            ..Monomial::default()
        }
    }

    pub fn omega1(s: Rational) -> Monomial {
        Monomial {
            w1exp: s,
            ..Monomial::default()
        }
    }

    pub fn d_omega1(n: u32) -> Monomial {
        Monomial {
            dw1: BTreeMap::from([(n, 1)]),
            ..Monomial::default()
        }
    }

    /// `B^(r w)`, normalized so the base is `e` or a rational > 1.
    pub fn exponential(base: Option<Rational>, r: Rational) -> Result<Monomial> {
        let mut m = Monomial {
            eexp: r,
            ..Monomial::default()
        };
        if m.eexp.is_zero() {
            return Ok(m);
        }
        if let Some(b) = base {
            if !b.is_positive() || b.is_one() {
                return Err(Error::UnsupportedExpansion(format!(
                    "exponential base {b} is outside (0,1) ∪ (1,∞)"
                )));
            }
            if b < Rational::one() {
                m.ebase = Some(&Rational::one() / &b);
                m.eexp = -m.eexp;
            } else {
                m.ebase = Some(b);
            }
        }
        Ok(m)
    }

    pub fn is_unit(&self) -> bool {
        self.eexp.is_zero()
            && self.wexp.is_zero()
            && self.lexp == 0
            && self.w1exp.is_zero()
            && self.dw1.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let (ebase, eexp) = combine_exponentials(
            (&self.ebase, &self.eexp),
            (&other.ebase, &other.eexp),
        )?;
        let mut dw1 = self.dw1.clone();
        for (n, j) in &other.dw1 {
            let slot = dw1.entry(*n).or_insert(0);
            *slot += j;
            if *slot == 0 {
                dw1.remove(n);
            }
        }
        Ok(Monomial {
            ebase,
            eexp,
            wexp: &self.wexp + &other.wexp,
            lexp: self.lexp + other.lexp,
            w1exp: &self.w1exp + &other.w1exp,
            dw1,
        })
    }

    /// Raise to a rational power; fails if a log or dW exponent would leave
    /// the integers.
    pub fn pow(&self, q: &Rational) -> Result<Monomial> {
        let scale_int = |m: i64| -> Result<i64> {
            (q * &Rational::int(m)).to_i64().ok_or_else(|| {
                Error::UnsupportedExpansion(format!(
                    "power {q} of an exponent-{m} log/dW factor is not integral"
                ))
            })
        };
        let mut dw1 = BTreeMap::new();
        for (n, j) in &self.dw1 {
            let s = scale_int(*j)?;
            if s != 0 {
                dw1.insert(*n, s);
            }
        }
        Ok(Monomial {
            ebase: if (q * &self.eexp).is_zero() {
                None
            } else {
                self.ebase.clone()
            },
            eexp: q * &self.eexp,
            wexp: q * &self.wexp,
            lexp: scale_int(self.lexp)?,
            w1exp: q * &self.w1exp,
            dw1,
        })
    }

    pub fn recip(&self) -> Monomial {
        self.pow(&Rational::int(-1))
            .expect("negation keeps integer exponents")
    }

    /// Semantic growth comparison. Errors when the germ and continuum axes
    /// disagree, or when distinct exponential axes are numerically too close
    /// to rank with confidence.
    pub fn cmp_growth(&self, other: &Monomial) -> Result<Ordering> {
        let germ = germ_cmp(self, other)?;
        let cont = continuum_cmp(self, other)?;
        match (germ, cont) {
            (g, Ordering::Equal) => Ok(g),
            (Ordering::Equal, c) => Ok(c),
            (g, c) if g == c => Ok(g),
            _ => Err(Error::IncomparableMonomials(format!(
                "germ and continuum axes disagree between {self:?} and {other:?}"
            ))),
        }
    }

    pub fn classify(&self) -> Result<Class> {
        match self.cmp_growth(&Monomial::unit())? {
            Ordering::Greater => Ok(Class::Infinite),
            Ordering::Equal => Ok(Class::Unit),
            Ordering::Less => Ok(Class::Infinitesimal),
        }
    }

    /// Total, deterministic, purely syntactic order used for term storage;
    /// agrees with `cmp_growth` whenever the latter is defined.
    pub fn syntactic_cmp(&self, other: &Monomial) -> Ordering {
        let dw_a: Vec<_> = self.dw1.iter().collect();
        let dw_b: Vec<_> = other.dw1.iter().collect();
        self.w1exp
            .cmp(&other.w1exp)
            .then_with(|| dw_a.cmp(&dw_b))
            .then_with(|| exp_value(self).total_cmp(&exp_value(other)))
            .then_with(|| self.eexp.cmp(&other.eexp))
            .then_with(|| self.wexp.cmp(&other.wexp))
            .then_with(|| self.lexp.cmp(&other.lexp))
    }
}

/// Signed growth rate of the exponential axis: eexp * ln(base).
fn exp_value(m: &Monomial) -> f64 {
    if m.eexp.is_zero() {
        return 0.0;
    }
    let ln_base = match &m.ebase {
        None => 1.0,
        Some(b) => b.to_f64().ln(),
    };
    m.eexp.to_f64() * ln_base
}

fn germ_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    let exp_ord = if a.ebase == b.ebase && a.eexp == b.eexp {
        Ordering::Equal
    } else {
        let (va, vb) = (exp_value(a), exp_value(b));
        let tol = 1e-9 * va.abs().max(vb.abs()).max(1.0);
        if (va - vb).abs() <= tol {
            // distinct representations, numerically indistinguishable:
            // refuse rather than invent an order
            return Err(Error::IncomparableMonomials(format!(
                "exponential axes {:?}^{} and {:?}^{} are too close to rank",
                a.ebase, a.eexp, b.ebase, b.eexp
            )));
        }
        va.total_cmp(&vb)
    };
    Ok(exp_ord
        .then_with(|| a.wexp.cmp(&b.wexp))
        .then_with(|| a.lexp.cmp(&b.lexp)))
}

fn continuum_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.dw1 != b.dw1 {
        return Err(Error::IncomparableMonomials(
            "distinct dW(n) contents have no defined relative growth".into(),
        ));
    }
    Ok(a.w1exp.cmp(&b.w1exp))
}

fn combine_exponentials(
    a: (&Option<Rational>, &Rational),
    b: (&Option<Rational>, &Rational),
) -> Result<(Option<Rational>, Rational)> {
    let (base_a, r_a) = a;
    let (base_b, r_b) = b;
    if r_a.is_zero() {
        return Ok((base_b.clone(), r_b.clone()));
    }
    if r_b.is_zero() {
        return Ok((base_a.clone(), r_a.clone()));
    }
    if base_a == base_b {
        let r = r_a + r_b;
        return Ok(if r.is_zero() { (None, r) } else { (base_a.clone(), r) });
    }
    Err(Error::UnsupportedExpansion(
        "mixed exponential bases in one monomial".into(),
    ))
}
