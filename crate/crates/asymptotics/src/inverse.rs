//! Asymptotic functional inversion: given g(k) eventually increasing to
//! infinity, find k(w) with g(k(w)) = w through the requested order.

use surreal_core::expr::{self, canonicalize, diff};
use surreal_core::{Error, Expr, Rational, Result};

use crate::expand::expand;
use crate::monomial::{Class, Monomial};
use crate::normal_form::NormalForm;

const MAX_NEWTON_STEPS: usize = 64;

/// Invert `g` (an expression in `var`) around infinity: the result is an
/// expression in `w` whose composition with `g` is `w` up to corrections
/// smaller than the last retained term.
///
/// Leading-order inversion (power or exponential) seeds a Newton iteration
/// `k <- k - (g(k) - w) / g'(k)` carried out on normal forms.
pub fn asymptotic_inverse(g: &Expr, var: &str, order: u32) -> Result<Expr> {
    let g = exponentials_to_exp(&canonicalize(g)?)?;
    let g_prime = diff(&g, var)?;
    let at_omega = g.substitute(var, &Expr::Omega)?;
    let lead_nf = expand(&at_omega, 0)?;
    let lead = lead_nf
        .lead()
        .ok_or_else(|| Error::NotInvertible("the germ of g vanishes".into()))?
        .clone();
    let mut k = initial_guess(&lead.mono, &lead.coeff)?;

    for _ in 0..MAX_NEWTON_STEPS {
        let k_nf = expand(&k, order)?;
        let residual = expand(
            &expr::sub(&g.substitute(var, &k)?, &Expr::Omega)?,
            order + 1,
        )?;
        if residual.lead().is_none() {
            // exact inverse: g(k) - w is identically zero
            return k_nf.to_expr();
        }
        let slope = expand(&g_prime.substitute(var, &k)?, order + 1)?;
        let correction = residual.mul(&slope.recip(order + 8)?)?;
        let Some(corr_lead) = correction.lead() else {
            break;
        };
        if converged(&k_nf, &corr_lead.mono, order)? {
            return k_nf.to_expr();
        }
        k = expr::sub(&k, &correction.to_expr()?)?;
    }
    Err(Error::OrderUnreachable(format!(
        "Newton refinement of the inverse of `{g}` stalled before order {order}"
    )))
}

/// Done when the next Newton correction falls strictly below the smallest
/// term we intend to keep, so every retained term is already exact.
fn converged(k_nf: &NormalForm, corr_lead: &Monomial, order: u32) -> Result<bool> {
    let mut target: Option<&Monomial> = None;
    let mut inf_count = 0u32;
    for t in k_nf.terms() {
        if t.mono.classify()? == Class::Infinitesimal {
            inf_count += 1;
        }
        target = Some(&t.mono);
    }
    if inf_count < order {
        return Ok(false);
    }
    match target {
        Some(m) => Ok(matches!(corr_lead.cmp_growth(m)?, std::cmp::Ordering::Less)),
        None => Ok(false),
    }
}

fn initial_guess(mono: &Monomial, coeff: &Expr) -> Result<Expr> {
    if !mono.w1exp.is_zero() || !mono.dw1.is_empty() {
        return Err(Error::NotInvertible(
            "the dominant growth lives on the continuum axis".into(),
        ));
    }
    let c = coeff.as_rational().ok_or_else(|| {
        Error::NotInvertible("the dominant coefficient is not rational".into())
    })?;
    if c.is_negative() || c.is_zero() {
        return Err(Error::NotInvertible(
            "the dominant coefficient is not positive".into(),
        ));
    }
    if !mono.eexp.is_zero() {
        if !mono.wexp.is_zero() || mono.lexp != 0 {
            return Err(Error::NotInvertible(
                "mixed exponential-power dominant growth".into(),
            ));
        }
        if mono.eexp.is_negative() {
            return Err(Error::NotInvertible("the dominant growth decays".into()));
        }
        // c * B^(r k) = w  =>  k = (ln w - ln c) / (r ln B)
        let ln_w = expr::ln(&Expr::Omega)?;
        let num = expr::sub(&ln_w, &expr::ln(&Expr::Rational(c.clone()))?)?;
        let ln_base = match mono.ebase.as_ref() {
            None => Expr::int(1),
            Some(b) => expr::ln(&Expr::Rational(b.clone()))?,
        };
        let den = expr::mul(&Expr::Rational(mono.eexp.clone()), &ln_base)?;
        return expr::div(&num, &den);
    }
    if mono.lexp != 0 || mono.wexp.is_zero() || mono.wexp.is_negative() {
        return Err(Error::NotInvertible(format!(
            "the dominant growth {mono:?} is not a positive power or exponential"
        )));
    }
    // c * k^alpha = w  =>  k = (w/c)^(1/alpha)
    let base = expr::div(&Expr::Omega, &Expr::Rational(c.clone()))?;
    expr::pow(
        &base,
        &Expr::Rational(&Rational::one() / &mono.wexp),
    )
}

/// Rewrite `b^x` with rational base and symbolic exponent as `e^(x ln b)`,
/// so that substituting a logarithmic inverse folds back through the
/// canonical exp/ln absorption.
pub fn exponentials_to_exp(e: &Expr) -> Result<Expr> {
    let rec = |xs: &[Expr]| -> Result<Vec<Expr>> {
        xs.iter().map(exponentials_to_exp).collect()
    };
    let out = match e {
        Expr::Power(b, x) if x.as_rational().is_none() => {
            if let Expr::Rational(base) = &**b {
                let ln_b = expr::ln(&Expr::Rational(base.clone()))?;
                Expr::Exp(Box::new(expr::mul(&exponentials_to_exp(x)?, &ln_b)?))
            } else {
                Expr::Power(
                    Box::new(exponentials_to_exp(b)?),
                    Box::new(exponentials_to_exp(x)?),
                )
            }
        }
        Expr::Sum(ts) => Expr::Sum(rec(ts)?),
        Expr::Product(fs) => Expr::Product(rec(fs)?),
        Expr::Power(b, x) => Expr::Power(
            Box::new(exponentials_to_exp(b)?),
            Box::new(exponentials_to_exp(x)?),
        ),
        Expr::Exp(a) => Expr::Exp(Box::new(exponentials_to_exp(a)?)),
        Expr::Ln(a) => Expr::Ln(Box::new(exponentials_to_exp(a)?)),
        Expr::Gamma(a) => Expr::Gamma(Box::new(exponentials_to_exp(a)?)),
        Expr::LnGamma(a) => Expr::LnGamma(Box::new(exponentials_to_exp(a)?)),
        Expr::Psi(a) => Expr::Psi(Box::new(exponentials_to_exp(a)?)),
        _ => e.clone(),
    };
    canonicalize(&out)
}
