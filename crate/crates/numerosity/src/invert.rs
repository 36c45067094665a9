//! The numerosity pipeline and its inverse.
//!
//! Forward: for a sequence term `a_k`, take the antidifference `F`, its
//! derivative `g = dF/dk`, and solve `g(k) = w` for `k`. The solution,
//! read at the germ `w`, is the full numerosity; trimming its infinitesimal
//! tail gives the refined numerosity.
//!
//! Exact inversion covers `g` affine, quadratic, a depressed cubic or a
//! biquadratic in `k - 1/2` (the Bernoulli polynomials `B_p(1/2 + y)` are
//! even or odd in `y`, so pure powers `k^p` land here for `p <= 4`), and
//! geometric bodies via logarithms. Anything else falls back to the
//! truncated asymptotic inverse.
//!
//! Inverse: given a germ `S(w)`, solve `S(w) = k` for `w`, integrate, and
//! take the forward difference; the integration constant is pinned to zero.

use crate::sequence::{antidifference, poly_coeffs, SequenceClass, SequenceTerm, INDEX};
use surreal_asymptotics::{asymptotic_inverse, expand, NormalForm};
use surreal_core::error::{Error, Result};
use surreal_core::expr::{self, antiderivative, canonicalize, diff, Expr};
use surreal_core::rational::Rational;

/// A computed numerosity: the closed form (exact or truncated), the refined
/// germ with infinitesimals dropped, and whether inversion was exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumerosityResult {
    pub full: Expr,
    pub refined: NormalForm,
    pub exact: bool,
}

/// The numerosity of `{a_k}`: invert `d/dk` of the antidifference at `w`.
///
/// `order` controls how many infinitesimal terms a fallback asymptotic
/// inversion keeps, and how deep the refined form is expanded.
pub fn full_numerosity(s: &SequenceTerm, order: u32) -> Result<NumerosityResult> {
    let growth = diff(&antidifference(s)?, INDEX)?;
    let (full, exact) = match &s.detected_class {
        SequenceClass::Geometric(g) => (invert_geometric(g)?, true),
        SequenceClass::Polynomial { .. } => invert_polynomial(&growth, order)?,
        SequenceClass::Unsupported => unreachable!("antidifference rejected it"),
    };
    let refined = expand(&full, order)?.refine()?;
    Ok(NumerosityResult {
        full,
        refined,
        exact,
    })
}

/// `c*(ln a)/(a-1) * a^k + d = w  =>  k = ln((w-d)(a-1)/(c ln a)) / ln a`.
///
/// The quotient is formed before the product so that matching factors
/// (`(e-1)/(e-1)` when differencing `e^(k+1) - e^k`) cancel symbolically.
fn invert_geometric(g: &crate::sequence::GeometricForm) -> Result<Expr> {
    let ratio = expr::div(
        &g.base_minus_one,
        &expr::mul(&g.scale, &g.log_base)?,
    )?;
    let arg = expr::mul(
        &expr::sub(&Expr::Omega, &Expr::Rational(g.shift.clone()))?,
        &ratio,
    )?;
    expr::div(&expr::ln(&arg)?, &g.log_base)
}

fn invert_polynomial(growth: &Expr, order: u32) -> Result<(Expr, bool)> {
    let coeffs = poly_coeffs(growth, INDEX).ok_or_else(|| {
        Error::Internal(format!("polynomial growth expected, got `{growth}`"))
    })?;
    match coeffs.len() {
        1 => Err(Error::NotInvertible(
            "the sequence does not grow, so no index reaches w".into(),
        )),
        2 => Ok((invert_affine(&coeffs)?, true)),
        3 => Ok((invert_quadratic(&coeffs)?, true)),
        4 | 5 => {
            if let Some(full) = invert_centered(&coeffs)? {
                Ok((full, true))
            } else {
                Ok((asymptotic_inverse(growth, INDEX, order)?, false))
            }
        }
        _ => Ok((asymptotic_inverse(growth, INDEX, order)?, false)),
    }
}

/// `a k + b = w`.
fn invert_affine(c: &[Rational]) -> Result<Expr> {
    expr::div(
        &expr::sub(&Expr::Omega, &Expr::Rational(c[0].clone()))?,
        &Expr::Rational(c[1].clone()),
    )
}

/// Complete the square: the increasing branch of `a k^2 + b k + c = w`.
fn invert_quadratic(c: &[Rational]) -> Result<Expr> {
    let (gamma, beta, alpha) = (&c[0], &c[1], &c[2]);
    let vertex = -&(beta / &(&Rational::int(2) * alpha));
    let lift = &(beta * beta) / &(&Rational::int(4) * &(alpha * alpha));
    let inner = expr::add(
        &expr::div(
            &expr::sub(&Expr::Omega, &Expr::Rational(gamma.clone()))?,
            &Expr::Rational(alpha.clone()),
        )?,
        &Expr::Rational(lift),
    )?;
    expr::add(&Expr::Rational(vertex), &expr::sqrt(&inner)?)
}

/// Recenter at `k = 1/2 + y` and solve the depressed cubic or biquadratic
/// there; `None` when the recentered polynomial has the wrong parity.
fn invert_centered(coeffs: &[Rational]) -> Result<Option<Expr>> {
    let growth = poly_expr(coeffs, INDEX)?;
    let recentered = growth.substitute(
        INDEX,
        &expr::add(&Expr::var("y"), &Expr::rat(1, 2))?,
    )?;
    let c = poly_coeffs(&recentered, "y")
        .ok_or_else(|| Error::Internal("recentering kept the polynomial".into()))?;
    let y = match c.len() {
        4 if c[2].is_zero() => depressed_cubic_root(&c)?,
        5 if c[3].is_zero() && c[1].is_zero() => biquadratic_root(&c)?,
        _ => return Ok(None),
    };
    Ok(Some(expr::add(&y, &Expr::rat(1, 2))?))
}

/// The real root of `y^3 + p y = q` (with `q ~ w` large) via the Vieta
/// form `y = C - p/(3C)`, `C = (q/2 + sqrt(q^2/4 + p^3/27))^(1/3)` — a
/// single cube root, so the expression stays real term by term.
fn depressed_cubic_root(c: &[Rational]) -> Result<Expr> {
    let p = &c[1] / &c[3];
    let q = expr::div(
        &expr::sub(&Expr::Omega, &Expr::Rational(c[0].clone()))?,
        &Expr::Rational(c[3].clone()),
    )?;
    if p.is_zero() {
        return expr::pow(&q, &Expr::rat(1, 3));
    }
    let disc = expr::add(
        &expr::div(&expr::pow(&q, &Expr::int(2))?, &Expr::int(4))?,
        &Expr::Rational(&(&p * &(&p * &p)) / &Rational::int(27)),
    )?;
    let c_root = expr::pow(
        &expr::add(&expr::div(&q, &Expr::int(2))?, &expr::sqrt(&disc)?)?,
        &Expr::rat(1, 3),
    )?;
    expr::sub(
        &c_root,
        &expr::mul(
            &Expr::Rational(&p / &Rational::int(3)),
            &expr::pow(&c_root, &Expr::int(-1))?,
        )?,
    )
}

/// `c4 z^2 + c2 z + c0 = w` for `z = y^2`, then `y = sqrt(z)`.
fn biquadratic_root(c: &[Rational]) -> Result<Expr> {
    let (c0, c2, c4) = (&c[0], &c[2], &c[4]);
    let vertex = -&(c2 / &(&Rational::int(2) * c4));
    let lift = &(c2 * c2) / &(&Rational::int(4) * &(c4 * c4));
    let inner = expr::add(
        &expr::div(
            &expr::sub(&Expr::Omega, &Expr::Rational(c0.clone()))?,
            &Expr::Rational(c4.clone()),
        )?,
        &Expr::Rational(lift),
    )?;
    let z = expr::add(&Expr::Rational(vertex), &expr::sqrt(&inner)?)?;
    expr::sqrt(&z)
}

fn poly_expr(coeffs: &[Rational], var: &str) -> Result<Expr> {
    let v = Expr::var(var);
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(expr::mul(
            &Expr::Rational(c.clone()),
            &expr::pow(&v, &Expr::int(i as i64))?,
        )?);
    }
    expr::add_all(&parts)
}

/// Find a sequence whose numerosity is the germ `S`: solve `S(w) = k` for
/// `w`, integrate over `k` (constant of integration pinned to zero), and
/// take the forward difference. The returned term carries the first index
/// at which it is real and non-negative.
pub fn sequence_from_numerosity(s_germ: &Expr) -> Result<SequenceTerm> {
    let e = canonicalize(s_germ)?;
    if e.any_node(&mut |n| matches!(n, Expr::Omega1 | Expr::DOmega1(_))) {
        return Err(Error::NotSolvable(
            "interval numerosities (W, dW) do not come from point sequences".into(),
        ));
    }
    if !e.free_vars().is_empty() {
        return Err(Error::NotSolvable(
            "the germ must be fully numeric in w".into(),
        ));
    }
    if !e.contains_omega_family() {
        return Err(Error::NotSolvable("the germ does not depend on w".into()));
    }
    let at = e.substitute_atom(&Expr::Omega, &Expr::var("t"))?;
    let h = solve_for_t(&at)?;
    let big = antiderivative(&h, INDEX)?;
    let shifted = big.substitute(INDEX, &expr::add(&Expr::var(INDEX), &Expr::int(1))?)?;
    let body = expr::sub(&shifted, &big)?;
    SequenceTerm::new(&body)
}

/// Solve `c*phi(t) + b = k` for `t`, for `phi` one of `t`, `t^e`, `ln t`,
/// or an exponential in `t`.
fn solve_for_t(e: &Expr) -> Result<Expr> {
    let mut offset = Rational::zero();
    let mut principal: Option<&Expr> = None;
    for term in e.terms() {
        match term {
            Expr::Rational(r) => offset += r,
            other if principal.is_none() => principal = Some(other),
            _ => {
                return Err(Error::NotSolvable(format!(
                    "`{e}` mixes several growth shapes"
                )))
            }
        }
    }
    let Some(principal) = principal else {
        return Err(Error::NotSolvable("the germ does not depend on w".into()));
    };
    let (c, rest) = principal.split_coeff();
    // the sequence index grows through the germ: the scale must be positive
    if !c.is_positive() {
        return Err(Error::NotSolvable(format!(
            "`{e}` does not grow with w"
        )));
    }
    let u = expr::div(
        &expr::sub(&Expr::var(INDEX), &Expr::Rational(offset))?,
        &Expr::Rational(c),
    )?;
    match rest.as_slice() {
        [Expr::Var(v)] if v == "t" => Ok(u),
        [Expr::Power(b, x)] if matches!(&**b, Expr::Var(v) if v == "t") => {
            let q = x
                .as_rational()
                .ok_or_else(|| Error::NotSolvable(format!("`{e}` is not a rational power")))?;
            if !q.is_positive() {
                return Err(Error::NotSolvable(format!("`{e}` does not grow with w")));
            }
            expr::pow(&u, &Expr::Rational(q.recip()))
        }
        [Expr::Ln(a)] if matches!(&**a, Expr::Var(v) if v == "t") => expr::exp(&u),
        [Expr::Exp(a)] => {
            let r = exp_slope(a)?;
            expr::div(&expr::ln(&u)?, &Expr::Rational(r))
        }
        [Expr::Power(b, x)] if b.as_rational().is_some() => {
            let base = b.as_rational().unwrap();
            if !(base > &Rational::one()) {
                return Err(Error::NotSolvable(format!("`{e}` does not grow with w")));
            }
            let r = exp_slope(x)?;
            expr::div(
                &expr::ln(&u)?,
                &expr::mul(&Expr::Rational(r), &expr::ln(&Expr::Rational(base.clone()))?)?,
            )
        }
        _ => Err(Error::NotSolvable(format!(
            "`{e}` is outside the invertible power/exponential/logarithm class"
        ))),
    }
}

/// Rational slope of an exponent in `t`, required positive.
fn exp_slope(arg: &Expr) -> Result<Rational> {
    let slope = match arg {
        Expr::Var(v) if v == "t" => Some(Rational::one()),
        Expr::Product(fs) => match fs.as_slice() {
            [Expr::Rational(r), Expr::Var(v)] if v == "t" => Some(r.clone()),
            _ => None,
        },
        _ => None,
    };
    match slope {
        Some(r) if r.is_positive() => Ok(r),
        _ => Err(Error::NotSolvable(format!(
            "exponent `{arg}` is not a positive multiple of w"
        ))),
    }
}
