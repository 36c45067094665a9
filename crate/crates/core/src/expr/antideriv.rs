//! Symbolic antidifferentiation in one real variable.
//!
//! Every symbol other than the integration variable — including `w`, `W`,
//! and `dW(n)` — is held constant, which is exactly the "formal integration"
//! convention the surreal integral needs. The supported class is products of
//!
//! * powers of the variable or of an affine image of it,
//! * integer powers of `ln` of the variable,
//! * exponentials (any base) with affine exponent,
//!
//! combined by antidifferentiation by parts. Anything else reports
//! [`Error::NoAntiderivative`].

use super::{add, add_all, div, ln, mul, mul_all, pow, sub, Expr};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `F` with `dF/dvar = e` and no constant of integration (the caller fixes
/// it; all pipelines here use differences `F(b) - F(a)` or pin `F(0) = 0`).
pub fn antiderivative(e: &Expr, var: &str) -> Result<Expr> {
    let mut parts = Vec::new();
    for term in e.terms() {
        parts.push(term_antiderivative(term, var)?);
    }
    add_all(&parts)
}

fn no_rule(term: &Expr) -> Error {
    Error::NoAntiderivative(format!("no rule covers `{term}`"))
}

fn term_antiderivative(term: &Expr, var: &str) -> Result<Expr> {
    let t = Expr::var(var);
    let (dep, rest): (Vec<Expr>, Vec<Expr>) = term
        .factors()
        .iter()
        .cloned()
        .partition(|f| f.contains_var(var));
    let constant = mul_all(&rest)?;
    if dep.is_empty() {
        return mul(&constant, &t);
    }
    let body = var_part_antiderivative(&dep, var)?;
    mul(&constant, &body)
}

/// Antidifferentiate a product of factors that all depend on `var`.
fn var_part_antiderivative(dep: &[Expr], var: &str) -> Result<Expr> {
    let t = Expr::var(var);
    // single-factor closed forms first
    if let [f] = dep {
        match f {
            Expr::Var(_) => return div(&pow(&t, &Expr::int(2))?, &Expr::int(2)),
            Expr::Power(b, x) if **b == t && !x.contains_var(var) => {
                return power_rule(&t, x);
            }
            Expr::Power(b, x) if !x.contains_var(var) => {
                // (a t + b)^p -> (a t + b)^(p+1) / (a (p+1))
                if let Some((lam, _)) = affine_in(b, var) {
                    let inner = power_rule(b, x)?;
                    return div(&inner, &lam);
                }
            }
            Expr::Ln(a) => {
                // ln u -> (u ln u - u) / a  for u = a t + b
                if let Some((lam, _)) = affine_in(a, var) {
                    let u = (**a).clone();
                    let v = sub(&mul(&u, &ln(&u)?)?, &u)?;
                    return div(&v, &lam);
                }
            }
            _ => {}
        }
    }
    // split into polynomial part t^p, log part ln(t)^m, exponential part;
    // the power p may be symbolic (variable-free), e.g. t^w
    let mut poly_exp: Option<Expr> = None;
    let mut log_exp: i64 = 0;
    let mut exponentials = Vec::new();
    for f in dep {
        match f {
            Expr::Var(_) => match poly_exp {
                None => poly_exp = Some(Expr::int(1)),
                Some(_) => return Err(no_rule(&Expr::Product(dep.to_vec()))),
            },
            Expr::Power(b, x)
                if matches!(**b, Expr::Var(ref v) if v == var) && !x.contains_var(var) =>
            {
                match poly_exp {
                    None => poly_exp = Some((**x).clone()),
                    Some(_) => return Err(no_rule(f)),
                }
            }
            Expr::Ln(a) if matches!(**a, Expr::Var(ref v) if v == var) => log_exp += 1,
            Expr::Power(b, x) => match (&**b, &**x) {
                (Expr::Ln(a), Expr::Rational(m))
                    if matches!(**a, Expr::Var(ref v) if v == var)
                        && m.is_integer()
                        && m.is_positive() =>
                {
                    log_exp += m.to_i64().unwrap();
                }
                (base, _) if !base.contains_var(var) => exponentials.push(f.clone()),
                _ => return Err(no_rule(f)),
            },
            Expr::Exp(_) => exponentials.push(f.clone()),
            _ => return Err(no_rule(f)),
        }
    }
    match (poly_exp, log_exp, exponentials.is_empty()) {
        // t^p ln(t)^m
        (p, m, true) => {
            let p = p.unwrap_or_else(|| Expr::int(0));
            poly_log(&t, &p, m)
        }
        // t^n * exponentials, n a non-negative integer
        (p, 0, false) => {
            let n = match p.as_ref().map(Expr::as_rational) {
                None => 0,
                Some(Some(q)) if q.is_integer() && !q.is_negative() => q.to_i64().unwrap(),
                _ => return Err(no_rule(&Expr::Product(dep.to_vec()))),
            };
            let lam = total_log_derivative(&exponentials, var)?;
            poly_times_exponential(&t, n, &mul_all(&exponentials)?, &lam)
        }
        _ => Err(no_rule(&Expr::Product(dep.to_vec()))),
    }
}

/// t^p -> t^(p+1)/(p+1), or ln t at p = -1. `x` is the exponent expression
/// and may be symbolic as long as it is variable-free.
fn power_rule(base: &Expr, x: &Expr) -> Result<Expr> {
    if matches!(x.as_rational(), Some(r) if *r == Rational::int(-1)) {
        return ln(base);
    }
    let up = add(x, &Expr::int(1))?;
    div(&pow(base, &up)?, &up)
}

/// ∫ t^p ln(t)^m dt by parts, m >= 0 an integer; p is variable-free and
/// may be symbolic.
fn poly_log(t: &Expr, p: &Expr, m: i64) -> Result<Expr> {
    if m == 0 {
        return power_rule(t, p);
    }
    let log = ln(t)?;
    let p1 = add(p, &Expr::int(1))?;
    if p1.is_zero() {
        // ln(t)^(m+1)/(m+1)
        return div(&pow(&log, &Expr::int(m + 1))?, &Expr::int(m + 1));
    }
    let lead = div(
        &mul(&pow(t, &p1)?, &pow(&log, &Expr::int(m))?)?,
        &p1,
    )?;
    let tail = poly_log(t, p, m - 1)?;
    sub(&lead, &mul(&div(&Expr::int(m), &p1)?, &tail)?)
}

/// d(ln X)/dt for a product X of exponential factors with affine exponents:
/// the sum of lambda_i * ln(base_i).
fn total_log_derivative(exponentials: &[Expr], var: &str) -> Result<Expr> {
    let mut parts = Vec::new();
    for f in exponentials {
        match f {
            Expr::Exp(a) => {
                let (lam, _) = affine_in(a, var).ok_or_else(|| no_rule(f))?;
                parts.push(lam);
            }
            Expr::Power(b, x) => {
                let (lam, _) = affine_in(x, var).ok_or_else(|| no_rule(f))?;
                parts.push(mul(&lam, &ln(b)?)?);
            }
            _ => return Err(no_rule(f)),
        }
    }
    let lam = add_all(&parts)?;
    if lam.is_zero() {
        return Err(Error::NoAntiderivative(
            "exponential factors cancel to a constant".into(),
        ));
    }
    Ok(lam)
}

/// ∫ t^n X dt = t^n X/L - (n/L) ∫ t^(n-1) X dt, where X' = L X.
fn poly_times_exponential(t: &Expr, n: i64, x: &Expr, lam: &Expr) -> Result<Expr> {
    if n == 0 {
        return div(x, lam);
    }
    let lead = div(&mul(&pow(t, &Expr::int(n))?, x)?, lam)?;
    let tail = poly_times_exponential(t, n - 1, x, lam)?;
    sub(&lead, &mul(&div(&Expr::int(n), lam)?, &tail)?)
}

/// Decompose `e` as `lam * var + mu` with `lam`, `mu` free of `var`;
/// requires `lam != 0`.
pub fn affine_in(e: &Expr, var: &str) -> Option<(Expr, Expr)> {
    let mut lam_terms = Vec::new();
    let mut mu_terms = Vec::new();
    for term in e.terms() {
        if !term.contains_var(var) {
            mu_terms.push(term.clone());
            continue;
        }
        let (dep, rest): (Vec<Expr>, Vec<Expr>) = term
            .factors()
            .iter()
            .cloned()
            .partition(|f| f.contains_var(var));
        if !matches!(dep.as_slice(), [Expr::Var(v)] if v == var) {
            return None;
        }
        lam_terms.push(mul_all(&rest).ok()?);
    }
    if lam_terms.is_empty() {
        return None;
    }
    let lam = add_all(&lam_terms).ok()?;
    if lam.is_zero() {
        return None;
    }
    Some((lam, add_all(&mu_terms).ok()?))
}
