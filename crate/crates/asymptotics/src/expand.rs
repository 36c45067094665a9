//! Expansion of exact expressions into truncated normal forms.
//!
//! The driver runs the recursive expansion with a per-node series budget,
//! then checks that the requested number of infinitesimal terms actually
//! cleared the truncation floor; if not it deepens the budget and retries,
//! so a caller asking for order n never silently receives fewer reliable
//! terms than exist.

use surreal_core::bernoulli::bernoulli_number;
use surreal_core::expr::{self, canonicalize};
use surreal_core::{Error, Expr, Rational, Result};

use crate::monomial::{Class, Monomial};
use crate::normal_form::{floor_max, power_series, NormalForm};

/// Expand `e` at `w -> infinity`, keeping every non-infinitesimal term and
/// the first `order` infinitesimal ones.
pub fn expand(e: &Expr, order: u32) -> Result<NormalForm> {
    let canonical = canonicalize(e)?;
    for round in 0..5u32 {
        let budget = order + 4 + round * round * 4;
        let nf = expand_budget(&canonical, budget)?;
        if let Some(done) = finalize(nf, order)? {
            return Ok(done);
        }
    }
    Err(Error::OrderUnreachable(format!(
        "series terms cancel faster than the budget grows for `{e}` at order {order}"
    )))
}

fn finalize(nf: NormalForm, order: u32) -> Result<Option<NormalForm>> {
    match nf.floor() {
        None => Ok(Some(nf.trim(order)?)),
        Some(f) => {
            if f.classify()? != Class::Infinitesimal {
                // the error bound swallows finite terms: must deepen
                return Ok(None);
            }
            let mut known = 0u32;
            for t in nf.terms() {
                if matches!(t.mono.classify(), Ok(Class::Infinitesimal)) {
                    known += 1;
                }
            }
            if known >= order {
                Ok(Some(nf.trim(order)?))
            } else {
                // more terms may hide below the floor
                Ok(None)
            }
        }
    }
}

pub(crate) fn expand_budget(e: &Expr, budget: u32) -> Result<NormalForm> {
    match e {
        Expr::Rational(_) | Expr::Constant(_) | Expr::Var(_) => {
            Ok(NormalForm::constant(e.clone()))
        }
        Expr::Omega => Ok(NormalForm::from_monomial(
            Monomial::omega(Rational::one()),
            Expr::int(1),
        )),
        Expr::Omega1 => Ok(NormalForm::from_monomial(
            Monomial::omega1(Rational::one()),
            Expr::int(1),
        )),
        Expr::DOmega1(n) => Ok(NormalForm::from_monomial(
            Monomial::d_omega1(*n),
            Expr::int(1),
        )),
        Expr::Sum(ts) => {
            let mut acc = NormalForm::zero();
            for t in ts {
                acc = acc.add(&expand_budget(t, budget)?)?;
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = NormalForm::constant(Expr::int(1));
            for f in fs {
                acc = acc.mul(&expand_budget(f, budget)?)?;
            }
            Ok(acc)
        }
        Expr::Power(b, x) => {
            if let Some(q) = x.as_rational() {
                return expand_budget(b, budget)?.pow_rational(q, budget);
            }
            if !e.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            // rational base, symbolic exponent: b^x = e^(x ln b)
            if let Expr::Rational(base) = &**b {
                let arg = expr::mul(x, &expr::ln(&Expr::Rational(base.clone()))?)?;
                return nf_exp(&expand_budget(&arg, budget)?, budget);
            }
            Err(Error::UnsupportedExpansion(format!(
                "`{e}` has no expansion in the transmonomial basis"
            )))
        }
        Expr::Exp(a) => {
            if !a.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            nf_exp(&expand_budget(a, budget)?, budget)
        }
        Expr::Ln(a) => {
            if !a.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            nf_ln(&expand_budget(a, budget)?, budget)
        }
        Expr::Gamma(a) => {
            if !a.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            Err(Error::UnsupportedExpansion(
                "Gamma of an unbounded argument grows like w^w, outside the basis".into(),
            ))
        }
        Expr::LnGamma(a) => {
            if !a.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            stirling_ln_gamma(&expand_budget(a, budget)?, budget)
        }
        Expr::Psi(a) => {
            if !a.contains_omega_family() {
                return Ok(NormalForm::constant(e.clone()));
            }
            stirling_psi(&expand_budget(a, budget)?, budget)
        }
    }
}

/// Decompose an exponential growth coefficient: `r` gives base e, and
/// `r * ln(b)` (rational b) gives base b.
fn growth_coefficient(coeff: &Expr) -> Result<(Rational, Option<Rational>)> {
    if let Some(r) = coeff.as_rational() {
        return Ok((r.clone(), None));
    }
    let (r, rest) = coeff.split_coeff();
    if let [Expr::Ln(b)] = rest.as_slice() {
        if let Expr::Rational(base) = &**b {
            return Ok((r, Some(base.clone())));
        }
    }
    Err(Error::UnsupportedExpansion(format!(
        "exponential with a non-rational growth coefficient `{coeff}`"
    )))
}

/// exp of a normal form: the infinite part must be `r*w + q*ln(w)` with
/// rational r, q (anything faster needs e^(E) atoms the basis lacks).
fn nf_exp(a: &NormalForm, budget: u32) -> Result<NormalForm> {
    let parts = a.split()?;
    let mut mono = Monomial::unit();
    for t in parts.infinite.terms() {
        if t.mono == Monomial::omega(Rational::one()) {
            // r*w -> e^(r w); r ln(b) * w -> b^(r w)
            let (r, base) = growth_coefficient(&t.coeff)?;
            mono = mono.mul(&Monomial::exponential(base, r)?)?;
        } else if t.mono == Monomial::log(1) {
            let r = t.coeff.as_rational().ok_or_else(|| {
                Error::UnsupportedExpansion(format!(
                    "exp of `{} ln(w)` needs a non-rational power of w",
                    t.coeff
                ))
            })?;
            mono = mono.mul(&Monomial::omega(r.clone()))?;
        } else {
            return Err(Error::UnsupportedExpansion(format!(
                "exp of a term growing like {:?} leaves the basis",
                t.mono
            )));
        }
    }
    let unit_factor = expr::exp(&parts.finite)?;
    let series = power_series(&parts.infinitesimal, budget, factorial_recip)?;
    series.mul_term(&mono, &unit_factor)
}

fn factorial_recip(k: u32) -> Rational {
    let mut f = Rational::one();
    for i in 1..=k as i64 {
        f = &f * &Rational::int(i);
    }
    &Rational::one() / &f
}

/// ln of a normal form via the leading monomial and log1p of the remainder.
fn nf_ln(a: &NormalForm, budget: u32) -> Result<NormalForm> {
    let lead = a
        .lead()
        .ok_or_else(|| Error::Domain("ln of a vanishing germ".into()))?
        .clone();
    if matches!(lead.coeff.as_rational(), Some(r) if r.is_negative()) {
        return Err(Error::Domain(
            "ln of a germ with negative leading coefficient".into(),
        ));
    }
    if !lead.mono.w1exp.is_zero() || !lead.mono.dw1.is_empty() {
        return Err(Error::UnsupportedExpansion(
            "logarithm of the continuum axis is outside the basis".into(),
        ));
    }
    if lead.mono.lexp != 0 {
        return Err(Error::UnsupportedExpansion(
            "iterated logarithm (ln ln w) is outside the basis".into(),
        ));
    }
    let mut acc = NormalForm::zero();
    if !lead.mono.eexp.is_zero() {
        // ln(B^(r w)) = r ln(B) * w
        let coeff = match &lead.mono.ebase {
            None => Expr::Rational(lead.mono.eexp.clone()),
            Some(b) => expr::mul(
                &Expr::Rational(lead.mono.eexp.clone()),
                &expr::ln(&Expr::Rational(b.clone()))?,
            )?,
        };
        acc = acc.add(&NormalForm::from_monomial(
            Monomial::omega(Rational::one()),
            coeff,
        ))?;
    }
    if !lead.mono.wexp.is_zero() {
        acc = acc.add(&NormalForm::from_monomial(
            Monomial::log(1),
            Expr::Rational(lead.mono.wexp.clone()),
        ))?;
    }
    acc = acc.add(&NormalForm::constant(expr::ln(&lead.coeff)?))?;
    let u = a.tail_over_lead(&lead)?;
    let log1p = power_series(&u, budget, |k| {
        if k == 0 {
            Rational::zero()
        } else {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            &Rational::int(sign) / &Rational::int(k as i64)
        }
    })?;
    acc.add(&log1p)
}

fn stirling_guard(z: &NormalForm, what: &str) -> Result<()> {
    let lead = z
        .lead()
        .ok_or_else(|| Error::Domain(format!("{what} of a vanishing germ")))?;
    if lead.mono.classify()? != Class::Infinite {
        return Err(Error::UnsupportedExpansion(format!(
            "{what} is expanded only for unbounded arguments"
        )));
    }
    if matches!(lead.coeff.as_rational(), Some(r) if r.is_negative()) {
        return Err(Error::Domain(format!(
            "{what} along a negatively-diverging germ"
        )));
    }
    Ok(())
}

/// Stirling: lnGamma(z) = (z - 1/2) ln z - z + (1/2)ln(2 pi)
///                        + sum B_2k / (2k(2k-1) z^(2k-1)).
fn stirling_ln_gamma(z: &NormalForm, budget: u32) -> Result<NormalForm> {
    stirling_guard(z, "lnGamma")?;
    let ln_z = nf_ln(z, budget)?;
    let mut acc = z.mul(&ln_z)?;
    acc = acc.sub(&ln_z.scale(&Expr::rat(1, 2))?)?;
    acc = acc.sub(z)?;
    acc = acc.add(&NormalForm::constant(Expr::ln_2pi_half()))?;
    let terms = budget / 2 + 1;
    for k in 1..=terms as i64 {
        let b = bernoulli_number(2 * k as usize);
        let c = &b / &Rational::int(2 * k * (2 * k - 1));
        let z_pow = z.pow_rational(&Rational::int(1 - 2 * k), budget)?;
        acc = acc.add(&z_pow.scale(&Expr::Rational(c))?)?;
    }
    let lead = z.lead().expect("guarded").mono.clone();
    let cut = lead.pow(&Rational::int(-(2 * terms as i64 + 1)))?;
    let floor = floor_max(acc.floor(), Some(&cut))?;
    let mut out = acc;
    out = out.with_floor(floor)?;
    out.set_truncated(true);
    Ok(out)
}

/// Stirling: psi(z) = ln z - 1/(2z) - sum B_2k / (2k z^2k).
fn stirling_psi(z: &NormalForm, budget: u32) -> Result<NormalForm> {
    stirling_guard(z, "psi")?;
    let mut acc = nf_ln(z, budget)?;
    let z_inv = z.recip(budget)?;
    acc = acc.sub(&z_inv.scale(&Expr::rat(1, 2))?)?;
    let terms = budget / 2 + 1;
    for k in 1..=terms as i64 {
        let b = bernoulli_number(2 * k as usize);
        let c = &b / &Rational::int(2 * k);
        let z_pow = z.pow_rational(&Rational::int(-2 * k), budget)?;
        acc = acc.sub(&z_pow.scale(&Expr::Rational(c))?)?;
    }
    let lead = z.lead().expect("guarded").mono.clone();
    let cut = lead.pow(&Rational::int(-(2 * terms as i64 + 2)))?;
    let floor = floor_max(acc.floor(), Some(&cut))?;
    let mut out = acc;
    out = out.with_floor(floor)?;
    out.set_truncated(true);
    Ok(out)
}
