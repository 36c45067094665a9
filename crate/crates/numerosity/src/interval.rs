//! Numerosities of real intervals.
//!
//! An interval's numerosity is `length * W` plus a finite part, where `W`
//! counts the reals per unit interval. The finite part is the interval's
//! Euler characteristic: endpoint inclusion contributes `+1/2`, exclusion
//! `-1/2`, and a half-included endpoint `0` — so `[a,b]` carries `+1`,
//! `(a,b)` carries `-1`, and half-open or half-included intervals carry `0`.

use surreal_core::error::{Error, Result};
use surreal_core::expr::{self, Expr};
use surreal_core::rational::Rational;

/// An interval endpoint; unbounded ends sit at `-w` and `w`, not at a
/// separate infinity: `[0, infinity)` is the length-`w` interval `[0, w)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Endpoint {
    MinusOmega,
    Value(Rational),
    Omega,
}

impl Endpoint {
    fn to_expr(&self) -> Expr {
        match self {
            Endpoint::MinusOmega => {
                expr::neg(&Expr::Omega).expect("negation cannot fail")
            }
            Endpoint::Value(r) => Expr::Rational(r.clone()),
            Endpoint::Omega => Expr::Omega,
        }
    }
}

/// How an endpoint participates in the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    Excluded,
    /// Half-included, as when a point is shared between two abutting pieces.
    Half,
}

impl Inclusion {
    fn weight(self) -> Rational {
        match self {
            Inclusion::Included => Rational::new(1, 2),
            Inclusion::Excluded => Rational::new(-1, 2),
            Inclusion::Half => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpec {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub lo_inclusion: Inclusion,
    pub hi_inclusion: Inclusion,
}

impl IntervalSpec {
    /// Requires `lo < hi`, or `lo = hi` with both ends included (a point).
    pub fn new(
        lo: Endpoint,
        lo_inclusion: Inclusion,
        hi: Endpoint,
        hi_inclusion: Inclusion,
    ) -> Result<IntervalSpec> {
        let ordered = lo < hi
            || (lo == hi
                && matches!(lo, Endpoint::Value(_))
                && lo_inclusion == Inclusion::Included
                && hi_inclusion == Inclusion::Included);
        if !ordered {
            return Err(Error::Domain(
                "an interval needs lo < hi, or a doubly-included point".into(),
            ));
        }
        Ok(IntervalSpec {
            lo,
            hi,
            lo_inclusion,
            hi_inclusion,
        })
    }
}

/// `(hi - lo) * W` plus the Euler characteristic of the inclusion pattern.
pub fn interval_numerosity(iv: &IntervalSpec) -> Result<Expr> {
    let length = expr::sub(&iv.hi.to_expr(), &iv.lo.to_expr())?;
    let chi = &iv.lo_inclusion.weight() + &iv.hi_inclusion.weight();
    expr::add(
        &expr::mul(&length, &Expr::Omega1)?,
        &Expr::Rational(chi),
    )
}

/// The numerosity of the integers, `2w`: the sequence pipeline handles
/// one-sided sequences only, and numerosity is invariant under sign change,
/// so the two mirrored copies of `{k >= 1}` (each `w - 1/2`) plus the
/// shared origin give `2(w - 1/2) + 1 = 2w`.
pub fn integers_numerosity() -> Expr {
    expr::mul(&Expr::int(2), &Expr::Omega)
        .expect("product of atoms cannot fail")
}
