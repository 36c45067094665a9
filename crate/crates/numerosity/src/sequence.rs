//! Sequence bodies, their class detection, the discrete antidifference, and
//! the exact counting oracle.
//!
//! A sequence is an expression in the index variable `k` ranging over
//! 0, 1, 2, ... . Two classes admit the closed-form numerosity pipeline:
//! rational-coefficient polynomials with positive leading coefficient, and
//! geometric terms `c*a^k + d` with positive scale, ratio above one, and a
//! non-negative rational shift. Everything else is carried as
//! [`SequenceClass::Unsupported`] so callers can still inspect the body.

use surreal_core::bernoulli::bernoulli_polynomial;
use surreal_core::error::{Error, Result};
use surreal_core::expr::{self, canonicalize, Expr};
use surreal_core::numeric::{eval_numeric, to_decimal_string, Bindings};
use surreal_core::rational::Rational;

/// The index variable every sequence body is written in.
pub const INDEX: &str = "k";

/// A geometric body `scale * base^k + shift`, kept in the exact shape it
/// appeared so reconstruction and cancellation stay symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricForm {
    /// The exponential factor as written in the body: `2^k`, `e^(k/2)`,
    /// `2^(2*k)`, ...
    pub factor: Expr,
    /// The per-index ratio `a` (the value of `factor` at `k = 1`).
    pub base: Expr,
    /// `ln a`, exact: rational for base-e factors, `n*ln(b)` otherwise.
    pub log_base: Expr,
    /// `a - 1`, exact.
    pub base_minus_one: Expr,
    /// The scale `c > 0`; a `k`-free constant, not necessarily rational
    /// (`e - 1` appears when differencing `e^(k+1) - e^k`).
    pub scale: Expr,
    /// The shift `d >= 0`.
    pub shift: Rational,
}

/// What the classifier recognized in a body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceClass {
    /// `sum coeffs[i] * k^i`, rational coefficients, lowest power first.
    /// Non-constant polynomials have a positive leading coefficient; a
    /// constant one is non-negative.
    Polynomial { coeffs: Vec<Rational> },
    Geometric(Box<GeometricForm>),
    Unsupported,
}

/// A sequence term: the canonical body, its detected class, and the first
/// index from which every term is real and non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTerm {
    pub body: Expr,
    pub detected_class: SequenceClass,
    pub valid_from: u64,
}

impl SequenceTerm {
    /// Canonicalize and classify `body`, which must be an expression in `k`
    /// alone (no other free variables, no `w`/`W`/`dW` atoms).
    pub fn new(body: &Expr) -> Result<SequenceTerm> {
        let body = canonicalize(body)?;
        if body.contains_omega_family() {
            return Err(Error::UnsupportedSequenceClass(
                "a sequence body must not mention w, W, or dW".into(),
            ));
        }
        if body.free_vars().iter().any(|v| v != INDEX) {
            return Err(Error::UnsupportedSequenceClass(format!(
                "a sequence body may only depend on `{INDEX}`"
            )));
        }
        let detected_class = classify(&body)?;
        let valid_from = valid_from(&body, &detected_class)?;
        Ok(SequenceTerm {
            body,
            detected_class,
            valid_from,
        })
    }
}

/// Detect the class of a canonical body. Growth invariants are part of the
/// class: a structurally polynomial body with a negative leading
/// coefficient is `Unsupported` because the sequence it describes shrinks.
fn classify(body: &Expr) -> Result<SequenceClass> {
    if let Some(coeffs) = poly_coeffs(body, INDEX) {
        let ok = match coeffs.as_slice() {
            [c] => !c.is_negative(),
            [.., lead] => lead.is_positive(),
            [] => unreachable!("poly_coeffs returns at least one coefficient"),
        };
        return Ok(if ok {
            SequenceClass::Polynomial { coeffs }
        } else {
            SequenceClass::Unsupported
        });
    }
    if let Some(form) = geometric_parts(body)? {
        return Ok(SequenceClass::Geometric(Box::new(form)));
    }
    Ok(SequenceClass::Unsupported)
}

/// Coefficients of `e` as a rational polynomial in `var`, lowest power
/// first; `None` when `e` is not such a polynomial. The result always has
/// at least one entry and no trailing zero except for the zero polynomial.
pub(crate) fn poly_coeffs(e: &Expr, var: &str) -> Option<Vec<Rational>> {
    let mut coeffs: Vec<Rational> = Vec::new();
    for term in e.terms() {
        let (c, rest) = term.split_coeff();
        let degree = match rest.as_slice() {
            [] => 0,
            [Expr::Var(v)] if v == var => 1,
            [Expr::Power(b, x)] if matches!(&**b, Expr::Var(v) if v == var) => {
                let q = x.as_rational()?;
                if !q.is_integer() || !q.is_positive() {
                    return None;
                }
                q.to_i64()? as usize
            }
            _ => return None,
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, Rational::zero());
        }
        coeffs[degree] += &c;
    }
    if coeffs.is_empty() {
        coeffs.push(Rational::zero());
    }
    Some(coeffs)
}

/// The exponent slope of an exponential-in-`k` factor: `Exp(r*k)` or
/// `b^(r*k)` with rational `r`.
fn slope_in_k(arg: &Expr) -> Option<Rational> {
    match arg {
        Expr::Var(v) if v == INDEX => Some(Rational::one()),
        Expr::Product(fs) => match fs.as_slice() {
            [Expr::Rational(r), Expr::Var(v)] if v == INDEX => Some(r.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// Try to read a canonical body as `scale * a^k + shift`.
fn geometric_parts(body: &Expr) -> Result<Option<GeometricForm>> {
    let mut shift = Rational::zero();
    let mut factor: Option<Expr> = None;
    let mut scale_parts: Vec<Expr> = Vec::new();
    for term in body.terms() {
        if let Expr::Rational(r) = term {
            shift += r;
            continue;
        }
        let mut exp_factor: Option<Expr> = None;
        let mut multiplier: Vec<Expr> = Vec::new();
        for f in term.factors() {
            let is_exponential = match f {
                Expr::Exp(a) => slope_in_k(a).is_some(),
                Expr::Power(b, x) => {
                    matches!(&**b, Expr::Rational(_)) && slope_in_k(x).is_some()
                }
                _ => false,
            };
            if is_exponential {
                if exp_factor.replace(f.clone()).is_some() {
                    return Ok(None); // two exponentials in one term
                }
            } else {
                if f.contains_var(INDEX) {
                    return Ok(None);
                }
                multiplier.push(f.clone());
            }
        }
        let Some(f) = exp_factor else { return Ok(None) };
        match &factor {
            None => factor = Some(f),
            Some(g) if *g == f => {}
            Some(_) => return Ok(None), // mixed bases don't form one ratio
        }
        scale_parts.push(expr::mul_all(&multiplier)?);
    }
    let Some(factor) = factor else { return Ok(None) };
    if shift.is_negative() {
        return Ok(None);
    }

    // the per-index ratio, exact
    let (base, log_base) = match &factor {
        Expr::Exp(a) => {
            let r = slope_in_k(a).expect("checked above");
            if !r.is_positive() {
                return Ok(None);
            }
            (expr::exp(&Expr::Rational(r.clone()))?, Expr::Rational(r))
        }
        Expr::Power(b, x) => {
            let Expr::Rational(b) = &**b else {
                unreachable!("checked above")
            };
            let n = slope_in_k(x).expect("checked above");
            // keep the effective ratio rational: integer slope only
            if !n.is_integer() || !n.is_positive() || !(b > &Rational::one()) {
                return Ok(None);
            }
            let base = b.pow_i64(n.to_i64().unwrap());
            let log = expr::mul(&Expr::Rational(n), &expr::ln(&Expr::Rational(b.clone()))?)?;
            (Expr::Rational(base), log)
        }
        _ => unreachable!("checked above"),
    };
    if matches!(base.as_rational(), Some(b) if !(b > &Rational::one())) {
        return Ok(None);
    }
    let scale = expr::add_all(&scale_parts)?;
    if numeric_value(&scale)? <= 0.0 {
        return Ok(None);
    }
    let base_minus_one = expr::sub(&base, &Expr::int(1))?;
    Ok(Some(GeometricForm {
        factor,
        base,
        log_base,
        base_minus_one,
        scale,
        shift,
    }))
}

/// Evaluate a constant (possibly `e`/`pi`-bearing) expression to `f64`.
pub(crate) fn numeric_value(e: &Expr) -> Result<f64> {
    let x = eval_numeric(e, &Bindings::new(), 40)?;
    to_decimal_string(&x, 20)
        .parse::<f64>()
        .map_err(|_| Error::Internal(format!("unreadable numeric value for `{e}`")))
}

/// The body evaluated at a concrete index, canonicalized.
pub(crate) fn body_at(body: &Expr, k: u64) -> Result<Expr> {
    body.substitute(INDEX, &Expr::int(k as i64))
}

/// Exact rational value of a polynomial at integer `k` (Horner).
fn poly_at(coeffs: &[Rational], k: u64) -> Rational {
    let x = Rational::int(k as i64);
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * &x) + c;
    }
    acc
}

/// `1 + max |c_i / c_n|`, an upper bound for the real roots of the
/// polynomial — beyond it the sign is the leading coefficient's.
fn root_bound(coeffs: &[Rational]) -> u64 {
    let lead = coeffs.last().expect("non-empty");
    let mut bound = Rational::one();
    for c in &coeffs[..coeffs.len() - 1] {
        let ratio = (c / lead).abs();
        if ratio > bound {
            bound = ratio;
        }
    }
    (bound.floor().to_i64().unwrap_or(i64::MAX) as u64).saturating_add(2)
}

/// First index from which every term is real and non-negative.
fn valid_from(body: &Expr, class: &SequenceClass) -> Result<u64> {
    match class {
        SequenceClass::Polynomial { coeffs } => {
            if coeffs.len() == 1 {
                return Ok(0); // non-negative constant
            }
            // beyond the root bound the (positive-lead) polynomial stays
            // positive; walk down to the last contiguous non-negative index
            let top = root_bound(coeffs);
            let mut k0 = 0;
            for k in (0..=top).rev() {
                if poly_at(coeffs, k).is_negative() {
                    k0 = k + 1;
                    break;
                }
            }
            Ok(k0)
        }
        SequenceClass::Geometric(_) => Ok(0), // c > 0, a > 1, d >= 0
        SequenceClass::Unsupported => {
            // families reaching this point (fractional powers, logarithmic
            // differences from the inverse pipeline) are increasing where
            // defined, so the first clean non-negative index is the start
            for k in 0..=VALIDITY_SCAN_LIMIT {
                if let Ok(v) = body_at(body, k).and_then(|e| numeric_value(&e)) {
                    if v >= -1e-15 {
                        return Ok(k);
                    }
                }
            }
            Ok(0)
        }
    }
}

const VALIDITY_SCAN_LIMIT: u64 = 10_000;

/// `F` with `F(k+1) - F(k) = a_k` and `F(0) = 0`.
///
/// Powers go through the Bernoulli-polynomial formula
/// `sum_{j<k} j^p = (B_{p+1}(k) - B_{p+1}(0)) / (p+1)`; geometric terms
/// telescope through `(a^k - 1)/(a - 1)`.
pub fn antidifference(s: &SequenceTerm) -> Result<Expr> {
    let k = Expr::var(INDEX);
    match &s.detected_class {
        SequenceClass::Polynomial { coeffs } => {
            let mut parts = Vec::new();
            for (p, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let scale = c / &Rational::int(p as i64 + 1);
                let bp = bernoulli_polynomial(p + 1);
                // j = 0 is skipped: that subtracts B_{p+1}(0), pinning F(0) = 0
                for (j, bc) in bp.iter().enumerate().skip(1) {
                    let coeff = &scale * bc;
                    if coeff.is_zero() {
                        continue;
                    }
                    parts.push(expr::mul(
                        &Expr::Rational(coeff),
                        &expr::pow(&k, &Expr::int(j as i64))?,
                    )?);
                }
            }
            expr::add_all(&parts)
        }
        SequenceClass::Geometric(g) => {
            let coeff = expr::div(&g.scale, &g.base_minus_one)?;
            let rising = expr::mul(&coeff, &g.factor)?;
            let linear = expr::mul(&Expr::Rational(g.shift.clone()), &k)?;
            expr::sub(&expr::add(&rising, &linear)?, &coeff)
        }
        SequenceClass::Unsupported => Err(Error::UnsupportedSequenceClass(format!(
            "`{}` is neither polynomial nor geometric",
            s.body
        ))),
    }
}

/// Exact count of indices `k >= valid_from` with `a_k <= cutoff`.
///
/// Polynomials are counted by a direct scan up to the monotonicity bound
/// followed by a doubling-then-bisecting search on the strictly increasing
/// tail; geometric terms by an exact (or, when `e` is involved, 40-digit)
/// multiplicative walk.
pub fn count_oracle(s: &SequenceTerm, cutoff: &Rational) -> Result<u64> {
    match &s.detected_class {
        SequenceClass::Polynomial { coeffs } => {
            if coeffs.len() == 1 {
                // a constant sequence is either all in or all out
                return if &coeffs[0] <= cutoff {
                    Err(Error::UnsupportedSequenceClass(
                        "a constant sequence has unboundedly many terms below any cutoff it reaches"
                            .into(),
                    ))
                } else {
                    Ok(0)
                };
            }
            let k0 = s.valid_from;
            // strictly increasing once the derivative is past its roots
            let deriv: Vec<Rational> = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::int(i as i64))
                .collect();
            let scan_end = root_bound(&deriv).max(k0);
            let mut count = 0;
            for k in k0..=scan_end {
                if &poly_at(coeffs, k) <= cutoff {
                    count += 1;
                }
            }
            // the increasing tail: largest index still under the cutoff
            let mut lo = scan_end; // a(lo) decided above
            let mut step = 1u64;
            let mut hi = loop {
                let probe = lo.saturating_add(step);
                if &poly_at(coeffs, probe) > cutoff {
                    break probe;
                }
                step = step.saturating_mul(2);
            };
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if &poly_at(coeffs, mid) <= cutoff {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(count + (lo - scan_end))
        }
        SequenceClass::Geometric(g) => {
            let all_rational = (
                g.base.as_rational(),
                g.scale.as_rational(),
            );
            if let (Some(base), Some(scale)) = all_rational {
                let mut power = scale.clone();
                let mut count = 0u64;
                while &(&power + &g.shift) <= cutoff {
                    count += 1;
                    power = &power * base;
                }
                Ok(count)
            } else {
                // transcendental values never tie a rational cutoff, so a
                // 40-digit comparison decides every boundary
                let cut = cutoff.to_f64();
                let mut count = 0u64;
                loop {
                    let v = numeric_value(&body_at(&s.body, count)?)?;
                    if v > cut {
                        break Ok(count);
                    }
                    count += 1;
                }
            }
        }
        SequenceClass::Unsupported => Err(Error::UnsupportedSequenceClass(format!(
            "`{}` is neither polynomial nor geometric",
            s.body
        ))),
    }
}
