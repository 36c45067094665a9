//! Truncated descending transmonomial sums.
//!
//! A `NormalForm` is a finite list of transmonomials plus an optional
//! truncation floor: `terms + O(floor)`. Every term is strictly above the
//! floor, so the listed coefficients are exact — all uncertainty introduced
//! by cutting an infinite series lives below the floor. Arithmetic tracks
//! floors pessimistically (`max` over the floors each operand can smear the
//! other's error onto).

use std::cmp::Ordering;

use surreal_core::expr::{self, canonicalize};
use surreal_core::{bernoulli::binomial_rational, Error, Expr, Rational, Result};

use crate::monomial::{Class, Monomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmonomial {
    pub mono: Monomial,
    /// canonical, `w`-free, nonzero
    pub coeff: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    terms: Vec<Transmonomial>,
    floor: Option<Monomial>,
    truncated: bool,
}

/// The three growth regimes of a normal form (finite part is the exact
/// coefficient of the unit monomial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurrealParts {
    pub infinite: NormalForm,
    pub finite: Expr,
    pub infinitesimal: NormalForm,
}

impl NormalForm {
    pub fn zero() -> NormalForm {
        NormalForm {
            terms: Vec::new(),
            floor: None,
            truncated: false,
        }
    }

    pub fn from_monomial(mono: Monomial, coeff: Expr) -> NormalForm {
        let mut nf = NormalForm::zero();
        if !coeff.is_zero() {
            nf.terms.push(Transmonomial { mono, coeff });
        }
        nf
    }

    pub fn constant(coeff: Expr) -> NormalForm {
        NormalForm::from_monomial(Monomial::unit(), coeff)
    }

    pub fn terms(&self) -> &[Transmonomial] {
        &self.terms
    }

    pub fn floor(&self) -> Option<&Monomial> {
        self.floor.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Transmonomial> {
        self.terms.first()
    }

    pub(crate) fn set_truncated(&mut self, t: bool) {
        self.truncated = t;
    }

    pub(crate) fn with_floor(mut self, floor: Option<Monomial>) -> Result<NormalForm> {
        self.floor = floor;
        self.normalize()
    }

    /// Sort descending, merge equal monomials, drop zero coefficients and
    /// anything at or below the floor.
    fn normalize(mut self) -> Result<NormalForm> {
        self.terms
            .sort_by(|a, b| b.mono.syntactic_cmp(&a.mono));
        let mut merged: Vec<Transmonomial> = Vec::with_capacity(self.terms.len());
        for t in std::mem::take(&mut self.terms) {
            match merged.last_mut() {
                Some(prev) if prev.mono == t.mono => {
                    prev.coeff = expr::add(&prev.coeff, &t.coeff)?;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        if let Some(f) = &self.floor {
            let mut kept = Vec::with_capacity(merged.len());
            for t in merged {
                match t.mono.cmp_growth(f)? {
                    Ordering::Greater => kept.push(t),
                    // a term at or below the floor is unreliable: drop it
                    _ => self.truncated = true,
                }
            }
            merged = kept;
        }
        self.terms = merged;
        Ok(self)
    }

    pub fn add(&self, other: &NormalForm) -> Result<NormalForm> {
        let floor = floor_max(self.floor.as_ref(), other.floor.as_ref())?;
        NormalForm {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
            floor,
            truncated: self.truncated || other.truncated,
        }
        .normalize()
    }

    pub fn neg(&self) -> Result<NormalForm> {
        self.scale(&Expr::int(-1))
    }

    pub fn sub(&self, other: &NormalForm) -> Result<NormalForm> {
        self.add(&other.neg()?)
    }

    /// Multiply by a `w`-free coefficient.
    pub fn scale(&self, c: &Expr) -> Result<NormalForm> {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = expr::mul(&t.coeff, c)?;
        }
        out.normalize()
    }

    /// Multiply by a single monomial with coefficient.
    pub fn mul_term(&self, mono: &Monomial, coeff: &Expr) -> Result<NormalForm> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Transmonomial {
                mono: t.mono.mul(mono)?,
                coeff: expr::mul(&t.coeff, coeff)?,
            });
        }
        let floor = match &self.floor {
            Some(f) => Some(f.mul(mono)?),
            None => None,
        };
        NormalForm {
            terms,
            floor,
            truncated: self.truncated,
        }
        .normalize()
    }

    pub fn mul(&self, other: &NormalForm) -> Result<NormalForm> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Transmonomial {
                    mono: a.mono.mul(&b.mono)?,
                    coeff: expr::mul(&a.coeff, &b.coeff)?,
                });
            }
        }
        // error terms: O(fa)*B smears to fa*lead(B), A*O(fb) to fb*lead(A),
        // O(fa)*O(fb) to fa*fb
        let mut floor = None;
        if let Some(fa) = &self.floor {
            floor = floor_max(
                floor.as_ref(),
                Some(&smear(fa, other.lead().map(|t| &t.mono), other.floor.as_ref())?),
            )?;
        }
        if let Some(fb) = &other.floor {
            floor = floor_max(
                floor.as_ref(),
                Some(&smear(fb, self.lead().map(|t| &t.mono), self.floor.as_ref())?),
            )?;
        }
        NormalForm {
            terms,
            floor,
            truncated: self.truncated || other.truncated,
        }
        .normalize()
    }

    /// Raise to a rational power. Non-integer (and negative) powers go
    /// through the binomial series in `tail/lead`, generating `budget`
    /// series terms.
    pub fn pow_rational(&self, q: &Rational, budget: u32) -> Result<NormalForm> {
        if q.is_zero() {
            return Ok(NormalForm::constant(Expr::int(1)));
        }
        if self.terms.is_empty() {
            if q.is_positive() {
                let floor = match &self.floor {
                    Some(f) => Some(f.pow(q)?),
                    None => None,
                };
                return NormalForm::zero().with_floor(floor);
            }
            return Err(Error::Domain(
                "reciprocal of a normal form with no retained terms".into(),
            ));
        }
        if let Some(n) = q.to_i64() {
            if n > 0 {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.mul(self)?;
                }
                return Ok(acc);
            }
        }
        let lead = self.lead().expect("nonempty").clone();
        let head_mono = lead.mono.pow(q)?;
        let head_coeff = expr::pow(&lead.coeff, &Expr::Rational(q.clone()))?;
        let u = self.tail_over_lead(&lead)?;
        let q_owned = q.clone();
        let series = power_series(&u, budget, move |k| {
            binomial_rational(&q_owned, k as usize)
        })?;
        let out = series.mul_term(&head_mono, &head_coeff)?;
        if self.floor.is_none() && !self.truncated {
            if let Some(exact) = self.exact_power(&out, q)? {
                return Ok(exact);
            }
        }
        Ok(out)
    }

    /// Detect a terminating binomial series: if the terms above the floor,
    /// raised back to the reciprocal power, reproduce the base exactly, the
    /// series is finite and the truncation floor can be dropped.
    fn exact_power(&self, out: &NormalForm, q: &Rational) -> Result<Option<NormalForm>> {
        let (Some(p), Some(d)) = (q.numer_i64(), q.denom_i64()) else {
            return Ok(None);
        };
        if p.unsigned_abs() > 8 || d > 8 || out.terms.len() > 16 || out.terms.is_empty() {
            return Ok(None);
        }
        let candidate = NormalForm {
            terms: out.terms.clone(),
            floor: None,
            truncated: false,
        };
        let lhs = candidate.pow_int(d)?;
        let matches = if p >= 0 {
            lhs.terms == self.pow_int(p)?.terms
        } else {
            lhs.mul(&self.pow_int(-p)?)?.terms == NormalForm::constant(Expr::int(1)).terms
        };
        Ok(if matches { Some(candidate) } else { None })
    }

    /// Exact non-negative integer power by repeated multiplication.
    fn pow_int(&self, n: i64) -> Result<NormalForm> {
        let mut acc = NormalForm::constant(Expr::int(1));
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn recip(&self, budget: u32) -> Result<NormalForm> {
        self.pow_rational(&Rational::int(-1), budget)
    }

    /// `(self - lead)/lead`: the infinitesimal remainder used as a series
    /// variable.
    pub(crate) fn tail_over_lead(&self, lead: &Transmonomial) -> Result<NormalForm> {
        let inv_coeff = expr::pow(&lead.coeff, &Expr::int(-1))?;
        let tail = NormalForm {
            terms: self.terms[1..].to_vec(),
            floor: self.floor.clone(),
            truncated: self.truncated,
        };
        let u = tail.mul_term(&lead.mono.recip(), &inv_coeff)?;
        for t in &u.terms {
            if t.mono.classify()? != Class::Infinitesimal {
                return Err(Error::IncomparableMonomials(format!(
                    "series remainder term {:?} is not infinitesimal",
                    t.mono
                )));
            }
        }
        Ok(u)
    }

    /// Rebuild the expression the normal form denotes.
    pub fn to_expr(&self) -> Result<Expr> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            parts.push(expr::mul(&mono_to_expr(&t.mono)?, &t.coeff)?);
        }
        expr::add_all(&parts)
    }

    /// Partition by growth class; the finite part is the unit coefficient.
    pub fn split(&self) -> Result<SurrealParts> {
        if let Some(f) = &self.floor {
            if f.classify()? != Class::Infinitesimal {
                return Err(Error::OrderUnreachable(
                    "truncation floor reaches the finite scale; parts are undetermined".into(),
                ));
            }
        }
        let mut infinite = NormalForm::zero();
        let mut finite = Expr::int(0);
        let mut infinitesimal = NormalForm::zero();
        for t in &self.terms {
            match t.mono.classify()? {
                Class::Infinite => infinite.terms.push(t.clone()),
                Class::Unit => finite = t.coeff.clone(),
                Class::Infinitesimal => infinitesimal.terms.push(t.clone()),
            }
        }
        infinitesimal.floor = self.floor.clone();
        infinitesimal.truncated = self.truncated;
        Ok(SurrealParts {
            infinite,
            finite,
            infinitesimal,
        })
    }

    /// Drop the infinitesimal part entirely (the paper's bar operator).
    pub fn refine(&self) -> Result<NormalForm> {
        let parts = self.split()?;
        parts.infinite.add(&NormalForm::constant(parts.finite))
    }

    /// Keep all non-infinitesimal terms and the first `order` infinitesimal
    /// ones. Terms whose class is undecidable (formal `dW(n)` factors,
    /// exponential near-ties) are always retained and never counted.
    pub(crate) fn trim(mut self, order: u32) -> Result<NormalForm> {
        let mut kept = Vec::with_capacity(self.terms.len());
        let mut seen_inf = 0u32;
        for t in std::mem::take(&mut self.terms) {
            if matches!(t.mono.classify(), Ok(Class::Infinitesimal)) {
                seen_inf += 1;
                if seen_inf > order {
                    self.truncated = true;
                    continue;
                }
            }
            kept.push(t);
        }
        self.terms = kept;
        Ok(self)
    }
}

impl SurrealParts {
    /// Recombine the three parts (used by invariants and the CLI envelope).
    pub fn recombine(&self) -> Result<NormalForm> {
        self.infinite
            .add(&NormalForm::constant(self.finite.clone()))?
            .add(&self.infinitesimal)
    }
}

/// Σ coeff(k) · u^k for k = 0..=budget, with the truncation floor at
/// `lead(u)^(budget+1)`.
pub(crate) fn power_series(
    u: &NormalForm,
    budget: u32,
    coeff: impl Fn(u32) -> Rational,
) -> Result<NormalForm> {
    let mut acc = NormalForm::constant(Expr::Rational(coeff(0)));
    if u.is_zero() {
        // exact apart from whatever error u itself carried
        return acc.with_floor(u.floor.clone());
    }
    let mut u_pow = NormalForm::constant(Expr::int(1));
    for k in 1..=budget {
        u_pow = u_pow.mul(u)?;
        let c = coeff(k);
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&u_pow.scale(&Expr::Rational(c))?)?;
    }
    let u_lead = u.lead().expect("nonzero").mono.clone();
    let cut = u_lead.pow(&Rational::int(budget as i64 + 1))?;
    let floor = floor_max(acc.floor.as_ref(), Some(&cut))?;
    let mut out = acc.with_floor(floor)?;
    out.set_truncated(true);
    Ok(out)
}

/// Error floor of `O(f) * (B + O(fb))`: the coarsest of `f*lead`, `f*fb`.
fn smear(f: &Monomial, lead: Option<&Monomial>, other_floor: Option<&Monomial>) -> Result<Monomial> {
    let mut worst: Option<Monomial> = None;
    if let Some(l) = lead {
        worst = floor_max(worst.as_ref(), Some(&f.mul(l)?))?;
    }
    if let Some(fb) = other_floor {
        worst = floor_max(worst.as_ref(), Some(&f.mul(fb)?))?;
    }
    Ok(worst.unwrap_or_else(|| f.clone()))
}

pub(crate) fn floor_max(a: Option<&Monomial>, b: Option<&Monomial>) -> Result<Option<Monomial>> {
    match (a, b) {
        (None, x) => Ok(x.cloned()),
        (x, None) => Ok(x.cloned()),
        (Some(x), Some(y)) => Ok(Some(match x.cmp_growth(y)? {
            Ordering::Less => y.clone(),
            _ => x.clone(),
        })),
    }
}

fn mono_to_expr(m: &Monomial) -> Result<Expr> {
    let mut factors = Vec::new();
    if !m.eexp.is_zero() {
        let arg = Expr::Product(vec![Expr::Rational(m.eexp.clone()), Expr::Omega]);
        factors.push(match &m.ebase {
            None => Expr::Exp(Box::new(arg)),
            Some(b) => Expr::Power(Box::new(Expr::Rational(b.clone())), Box::new(arg)),
        });
    }
    if !m.wexp.is_zero() {
        factors.push(Expr::Power(
            Box::new(Expr::Omega),
            Box::new(Expr::Rational(m.wexp.clone())),
        ));
    }
    if m.lexp != 0 {
        factors.push(Expr::Power(
            Box::new(Expr::Ln(Box::new(Expr::Omega))),
            Box::new(Expr::int(m.lexp)),
        ));
    }
    if !m.w1exp.is_zero() {
        factors.push(Expr::Power(
            Box::new(Expr::Omega1),
            Box::new(Expr::Rational(m.w1exp.clone())),
        ));
    }
    for (n, j) in &m.dw1 {
        factors.push(Expr::Power(
            Box::new(Expr::DOmega1(*n)),
            Box::new(Expr::int(*j)),
        ));
    }
    canonicalize(&Expr::Product(factors))
}
