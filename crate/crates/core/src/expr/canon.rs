//! Canonical forms.
//!
//! The canonical shape is a fully distributed sum of products:
//!
//! * sums hold >= 2 distinct terms, ordered by descending growth;
//! * each term is `coeff * atoms...` with the rational coefficient first and
//!   (except for split rational-base powers, below) one power factor per
//!   base — exponents merge by addition;
//! * rational arithmetic folds exactly, `0^0 = 1`, zero products vanish;
//! * `exp` splits over sums and absorbs logarithms (`e^(q ln x) = x^q`);
//! * rational bases and `e` extract the rational part of sum exponents
//!   (`2^(w+1) = 2 * 2^w`, `e^(k+1) = e * e^k`), while symbolic bases keep
//!   merged exponents (`w^(c-1)` stays put) — the pair of conventions the
//!   identity corpus pins down;
//! * square roots of sums are scaled so the radicand has integer
//!   coefficients with squarefree content: `(1/2)sqrt(4w + 1/3)` becomes
//!   `(1/6)sqrt(36w + 3)`;
//! * gamma-family atoms shift integer offsets: `lnGamma(x+n)` unfolds to
//!   `lnGamma(x) + sum ln(x+i)`.
//!
//! To keep the opposing rewrites (merge exponents of equal bases vs. split
//! rational parts back out) from chasing each other, `cpow`/`cexp` reduce to
//! *piece lists* — multiplicative factors produced without re-entering the
//! product canonicalizer — and `cmul` iterates piece production under a
//! multiset fixpoint check.
//!
//! All free variables are read as positive reals for germ-sign purposes,
//! matching the side conditions the identities carry.

use super::{Expr, NamedConstant};
use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

pub fn canonicalize(e: &Expr) -> Result<Expr> {
    match e {
        Expr::Rational(_)
        | Expr::Constant(_)
        | Expr::Omega
        | Expr::Omega1
        | Expr::DOmega1(_)
        | Expr::Var(_) => Ok(e.clone()),
        Expr::Sum(ts) => {
            let ts = ts.iter().map(canonicalize).collect::<Result<Vec<_>>>()?;
            csum(ts)
        }
        Expr::Product(fs) => {
            let fs = fs.iter().map(canonicalize).collect::<Result<Vec<_>>>()?;
            cmul(fs)
        }
        Expr::Power(b, x) => cpow(canonicalize(b)?, canonicalize(x)?),
        Expr::Exp(a) => cexp(canonicalize(a)?),
        Expr::Ln(a) => cln(canonicalize(a)?),
        Expr::Gamma(a) => cgamma(GammaKind::Gamma, canonicalize(a)?),
        Expr::LnGamma(a) => cgamma(GammaKind::LnGamma, canonicalize(a)?),
        Expr::Psi(a) => cgamma(GammaKind::Psi, canonicalize(a)?),
    }
}

/// Sum of canonical terms -> canonical expression.
pub(crate) fn csum(terms: Vec<Expr>) -> Result<Expr> {
    let mut grouped: BTreeMap<Vec<Expr>, Rational> = BTreeMap::new();
    let mut stack = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t {
            Expr::Sum(inner) => stack.extend(inner.into_iter().rev()),
            other => {
                let (c, fs) = other.split_coeff();
                let slot = grouped.entry(fs).or_insert_with(Rational::zero);
                *slot += &c;
            }
        }
    }
    let mut out: Vec<Expr> = grouped
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(fs, c)| build_term(c, fs))
        .collect();
    match out.len() {
        0 => Ok(Expr::Rational(Rational::zero())),
        1 => Ok(out.pop().unwrap()),
        _ => {
            out.sort_by_cached_key(|t| (std::cmp::Reverse(term_growth(t)), t.clone()));
            Ok(Expr::Sum(out))
        }
    }
}

fn build_term(c: Rational, fs: Vec<Expr>) -> Expr {
    if fs.is_empty() {
        return Expr::Rational(c);
    }
    if c.is_one() {
        if fs.len() == 1 {
            return fs.into_iter().next().unwrap();
        }
        return Expr::Product(fs);
    }
    let mut all = Vec::with_capacity(fs.len() + 1);
    all.push(Expr::Rational(c));
    all.extend(fs);
    Expr::Product(all)
}

/// Product of canonical factors -> canonical expression.
pub(crate) fn cmul(factors: Vec<Expr>) -> Result<Expr> {
    let mut cur = factors;
    for _ in 0..24 {
        // Flatten nested products and fold rational factors.
        let mut coeff = Rational::one();
        let mut rest: Vec<Expr> = Vec::new();
        let mut stack = cur;
        stack.reverse();
        while let Some(f) = stack.pop() {
            match f {
                Expr::Product(fs) => stack.extend(fs.into_iter().rev()),
                Expr::Rational(r) => coeff *= &r,
                other => rest.push(other),
            }
        }
        if coeff.is_zero() {
            return Ok(Expr::Rational(Rational::zero()));
        }

        // A bare sum factor first merges with other powers of the same sum,
        // so quotients like S/S fold to 1 instead of distributing into
        // partial fractions. Positive-integer totals are left alone: those
        // are the distribution pass's job (sum_pow_pieces relies on it).
        let mut merge: Option<(Expr, Expr)> = None;
        for f in &rest {
            if !matches!(f, Expr::Sum(_)) {
                continue;
            }
            let mut exps = Vec::new();
            for g in &rest {
                match g {
                    Expr::Power(b, x) if **b == *f => exps.push((**x).clone()),
                    other if other == f => exps.push(Expr::int(1)),
                    _ => {}
                }
            }
            if exps.len() < 2 {
                continue;
            }
            let total = csum(exps)?;
            if matches!(total.as_rational(), Some(r) if r.is_integer() && r.is_positive()) {
                continue;
            }
            merge = Some((f.clone(), total));
            break;
        }
        if let Some((base, total)) = merge {
            let mut keep: Vec<Expr> = vec![Expr::Rational(coeff)];
            for f in rest {
                let absorbed = match &f {
                    Expr::Power(b, _) => **b == base,
                    other => *other == base,
                };
                if !absorbed {
                    keep.push(f);
                }
            }
            keep.extend(pow_pieces(base, total)?);
            cur = keep;
            continue;
        }

        // Distribute over any sum factor.
        if let Some(pos) = rest.iter().position(|f| matches!(f, Expr::Sum(_))) {
            let sum = rest.remove(pos);
            let Expr::Sum(ts) = sum else { unreachable!() };
            let mut products = Vec::with_capacity(ts.len());
            for t in ts {
                let mut fs = Vec::with_capacity(rest.len() + 2);
                fs.push(Expr::Rational(coeff.clone()));
                fs.push(t);
                fs.extend(rest.iter().cloned());
                products.push(cmul(fs)?);
            }
            return csum(products);
        }

        // Merge powers of equal bases; pool all exponential factors.
        let mut exp_args: Vec<Expr> = Vec::new();
        let mut bases: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
        for f in &rest {
            match f {
                Expr::Exp(a) => exp_args.push((**a).clone()),
                Expr::Constant(NamedConstant::E) => exp_args.push(Expr::int(1)),
                Expr::Power(b, x) => bases
                    .entry((**b).clone())
                    .or_default()
                    .push((**x).clone()),
                atom => bases.entry(atom.clone()).or_default().push(Expr::int(1)),
            }
        }
        let mut next: Vec<Expr> = Vec::new();
        if !exp_args.is_empty() {
            let total = csum(exp_args)?;
            next.extend(exp_pieces(total)?);
        }
        for (b, xs) in bases {
            let x = csum(xs)?;
            next.extend(pow_pieces(b, x)?);
        }
        // merge rational bases sharing one symbolic exponent: 2^x (1/3)^x -> (2/3)^x
        let mut shared: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut kept: Vec<Expr> = Vec::new();
        for f in next {
            match f {
                Expr::Power(b, x)
                    if matches!(*b, Expr::Rational(_)) && x.as_rational().is_none() =>
                {
                    let Expr::Rational(rb) = *b else { unreachable!() };
                    shared
                        .entry(*x)
                        .and_modify(|acc| *acc *= &rb)
                        .or_insert(rb);
                }
                other => kept.push(other),
            }
        }
        let mut next = kept;
        for (x, b) in shared {
            next.extend(pow_pieces(Expr::Rational(b), x)?);
        }
        next.retain(|f| !f.is_one());
        if !coeff.is_one() {
            next.push(Expr::Rational(coeff.clone()));
        }

        // Fixed point? Compare as multisets.
        let mut a = rest;
        if !coeff.is_one() {
            a.push(Expr::Rational(coeff.clone()));
        }
        a.sort();
        let mut b = next.clone();
        b.sort();
        if a == b {
            return Ok(assemble_product(next));
        }
        cur = next;
    }
    Err(Error::Internal(
        "product canonicalization did not converge".into(),
    ))
}

fn assemble_product(factors: Vec<Expr>) -> Expr {
    let mut coeff = Rational::one();
    let mut rest: Vec<Expr> = Vec::new();
    for f in factors {
        match f {
            Expr::Rational(r) => coeff *= &r,
            other => rest.push(other),
        }
    }
    rest.sort_by(factor_cmp);
    build_term(coeff, rest)
}

/// Power of canonical base and exponent -> canonical expression.
pub(crate) fn cpow(base: Expr, exponent: Expr) -> Result<Expr> {
    cmul(pow_pieces(base, exponent)?)
}

/// `exp` of a canonical argument -> canonical expression.
pub(crate) fn cexp(arg: Expr) -> Result<Expr> {
    cmul(exp_pieces(arg)?)
}

/// Multiplicative pieces of `base^exponent`, produced without invoking the
/// product canonicalizer on the pieces themselves.
fn pow_pieces(base: Expr, exponent: Expr) -> Result<Vec<Expr>> {
    if exponent.is_zero() {
        return Ok(vec![]); // includes 0^0 = 1
    }
    if exponent.is_one() {
        return Ok(vec![base]);
    }
    match base {
        Expr::Rational(rb) => rational_pow_pieces(rb, exponent),
        Expr::Constant(NamedConstant::E) => exp_pieces(exponent),
        Expr::Exp(a) => {
            let scaled = cmul(vec![(*a).clone(), exponent])?;
            exp_pieces(scaled)
        }
        Expr::Power(b2, x2) => {
            // (b^p)^q = b^(pq); sound here because germ bases are positive
            let merged = cmul(vec![(*x2).clone(), exponent])?;
            pow_pieces((*b2).clone(), merged)
        }
        Expr::Product(fs) => {
            let mut out = Vec::new();
            for f in fs {
                out.extend(pow_pieces(f, exponent.clone())?);
            }
            Ok(out)
        }
        Expr::Sum(ts) => sum_pow_pieces(ts, exponent),
        other => {
            // symbolic atoms keep merged exponents
            Ok(vec![Expr::Power(Box::new(other), Box::new(exponent))])
        }
    }
}

fn rational_pow_pieces(rb: Rational, exponent: Expr) -> Result<Vec<Expr>> {
    if let Expr::Rational(rx) = &exponent {
        if rb.is_zero() {
            return if rx.is_negative() {
                Err(Error::Pow("zero raised to a negative power".into()))
            } else {
                Ok(vec![Expr::int(0)])
            };
        }
        if let Some(v) = rb.checked_pow(rx) {
            return Ok(vec![Expr::Rational(v)]);
        }
        if rb.is_negative() {
            // odd denominators keep a real value: (-r)^(p/q) = +-(r^(p/q))
            if (rx.denom() % 2u8).to_i64() == Some(0) {
                return Err(Error::Domain(format!(
                    "({rb})^({rx}) is not a real number"
                )));
            }
            let mut out = rational_pow_pieces(rb.abs(), exponent.clone())?;
            if (rx.numer() % 2u8).to_i64() != Some(0) {
                out.push(Expr::int(-1));
            }
            return Ok(out);
        }
        if rx.denom().to_i64() == Some(2) {
            // r^(n/2) = sqrt(r^n) with the square part extracted
            let n = rx
                .numer()
                .to_i64()
                .ok_or_else(|| Error::Pow(format!("exponent numerator too large: {rx}")))?;
            let v = rb.pow_i64(n);
            let (s, c) = v.sqrt_decompose();
            let c = Rational::from_big(c, 1.into());
            let mut out = Vec::new();
            if !s.is_one() {
                out.push(Expr::Rational(s));
            }
            if !c.is_one() {
                out.push(Expr::Power(
                    Box::new(Expr::Rational(c)),
                    Box::new(Expr::rat(1, 2)),
                ));
            }
            return Ok(out);
        }
        return Ok(vec![Expr::Power(
            Box::new(Expr::Rational(rb)),
            Box::new(exponent),
        )]);
    }
    // symbolic exponent over a rational base
    if rb.is_zero() {
        return if syntactically_positive(&exponent) {
            Ok(vec![Expr::int(0)])
        } else {
            Err(Error::Pow(
                "zero base with a symbolic exponent of unknown sign".into(),
            ))
        };
    }
    if rb.is_one() {
        return Ok(vec![]);
    }
    let (r, sym) = split_exponent(&exponent)?;
    if !r.is_zero() {
        if let Some(sym) = sym {
            let mut out = rational_pow_pieces(rb.clone(), Expr::Rational(r))?;
            out.extend(rational_pow_pieces(rb, sym)?);
            return Ok(out);
        }
    }
    // b^(x/ln(b)) = e^x: route through exp when the exponent carries a
    // reciprocal ln(b), so the logarithms cancel instead of nesting
    let cancels = exponent.factors().iter().any(|f| match f {
        Expr::Power(b, q) => {
            matches!(&**b, Expr::Ln(a) if **a == Expr::Rational(rb.clone()))
                && matches!(q.as_rational(), Some(x) if x.is_negative())
        }
        _ => false,
    });
    if cancels {
        let arg = cmul(vec![
            exponent,
            Expr::Ln(Box::new(Expr::Rational(rb))),
        ])?;
        return exp_pieces(arg);
    }
    // negative growth coefficient: b^(-x) = (1/b)^x, so exponentials over a
    // common exponent merge regardless of orientation
    let (c, _) = exponent.split_coeff();
    if c.is_negative() {
        let flipped = cmul(vec![Expr::int(-1), exponent])?;
        return Ok(vec![Expr::Power(
            Box::new(Expr::Rational(rb.recip())),
            Box::new(flipped),
        )]);
    }
    Ok(vec![Expr::Power(
        Box::new(Expr::Rational(rb)),
        Box::new(exponent),
    )])
}

fn sum_pow_pieces(ts: Vec<Expr>, exponent: Expr) -> Result<Vec<Expr>> {
    if let Expr::Rational(rx) = &exponent {
        if rx.is_integer() && rx.is_positive() {
            if let Some(n) = rx.to_i64().filter(|n| *n <= 32) {
                // expand by repeated squaring over the distributing product
                let base = Expr::Sum(ts);
                let mut acc = Expr::int(1);
                let mut sq = base;
                let mut k = n;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = cmul(vec![acc, sq.clone()])?;
                    }
                    k >>= 1;
                    if k > 0 {
                        sq = cmul(vec![sq.clone(), sq])?;
                    }
                }
                return Ok(vec![acc]);
            }
        }
        if *rx == Rational::new(1, 2) || *rx == Rational::new(-1, 2) {
            let (s, radicand) = radical_parts(ts)?;
            let (scale, sign) = if rx.is_negative() {
                (s.recip(), Expr::rat(-1, 2))
            } else {
                (s, Expr::rat(1, 2))
            };
            let mut out = Vec::new();
            if !scale.is_one() {
                out.push(Expr::Rational(scale));
            }
            out.push(Expr::Power(Box::new(radicand), Box::new(sign)));
            return Ok(out);
        }
    }
    Ok(vec![Expr::Power(
        Box::new(Expr::Sum(ts)),
        Box::new(exponent),
    )])
}

/// Scale `sqrt(sum)` so the radicand has integer coefficients of squarefree
/// content: returns `(s, R)` with `sqrt(sum) = s * sqrt(R)`. Fixed point of
/// itself.
fn radical_parts(ts: Vec<Expr>) -> Result<(Rational, Expr)> {
    let mut content = Rational::zero();
    for t in &ts {
        let (c, _) = t.split_coeff();
        content = content.gcd(&c);
    }
    if content.is_zero() {
        return Err(Error::Internal("empty radicand".into()));
    }
    let (s, c) = content.sqrt_decompose();
    let c = Rational::from_big(c, 1.into());
    let scale = &c / &content; // radicand' = radicand * c / content
    let radicand = if scale.is_one() {
        Expr::Sum(ts)
    } else {
        cmul(vec![Expr::Rational(scale), Expr::Sum(ts)])?
    };
    Ok((s, radicand))
}

/// Split a canonical exponent into (rational part, symbolic remainder).
fn split_exponent(x: &Expr) -> Result<(Rational, Option<Expr>)> {
    match x {
        Expr::Rational(r) => Ok((r.clone(), None)),
        Expr::Sum(ts) => {
            let mut r = Rational::zero();
            let mut rest = Vec::new();
            for t in ts {
                match t {
                    Expr::Rational(q) => r += q,
                    other => rest.push(other.clone()),
                }
            }
            if rest.is_empty() {
                Ok((r, None))
            } else {
                Ok((r, Some(csum(rest)?)))
            }
        }
        other => Ok((Rational::zero(), Some(other.clone()))),
    }
}

/// Multiplicative pieces of `e^arg`: the rational part of the exponent
/// splits off, bare-logarithm terms are absorbed into powers, and whatever
/// remains stays inside a single `Exp` atom.
fn exp_pieces(arg: Expr) -> Result<Vec<Expr>> {
    let terms = match arg {
        Expr::Sum(ts) => ts,
        other => vec![other],
    };
    let mut out: Vec<Expr> = Vec::new();
    let mut plain: Vec<Expr> = Vec::new();
    let mut rational = Rational::zero();
    for t in terms {
        match t {
            Expr::Rational(r) => rational += &r,
            Expr::Ln(x) => out.push(*x),
            Expr::Product(fs) => {
                if let Some(pos) = fs.iter().position(|f| matches!(f, Expr::Ln(_))) {
                    // e^(c ln x) = x^c
                    let mut rest = fs.clone();
                    let Expr::Ln(x) = rest.remove(pos) else { unreachable!() };
                    let multiplier = cmul(rest)?;
                    out.extend(pow_pieces(*x, multiplier)?);
                } else {
                    plain.push(Expr::Product(fs));
                }
            }
            other => plain.push(other),
        }
    }
    if rational.is_one() {
        out.push(Expr::Constant(NamedConstant::E));
    } else if !rational.is_zero() {
        out.push(Expr::Exp(Box::new(Expr::Rational(rational))));
    }
    if !plain.is_empty() {
        out.push(Expr::Exp(Box::new(csum(plain)?)));
    }
    Ok(out)
}

/// `ln` of a canonical argument.
pub(crate) fn cln(arg: Expr) -> Result<Expr> {
    match arg {
        Expr::Rational(r) => {
            if !r.is_positive() {
                return Err(Error::Domain(format!("ln({r}) is undefined")));
            }
            if r.is_one() {
                Ok(Expr::int(0))
            } else {
                Ok(Expr::Ln(Box::new(Expr::Rational(r))))
            }
        }
        Expr::Constant(NamedConstant::E) => Ok(Expr::int(1)),
        Expr::Exp(x) => Ok(*x),
        Expr::Gamma(x) => cgamma(GammaKind::LnGamma, *x),
        Expr::Power(b, x) => {
            let lb = cln((*b).clone())?;
            cmul(vec![*x, lb])
        }
        Expr::Product(fs) => {
            // recognize ln(2 pi) so the Stirling constant unifies
            if fs.len() == 2
                && fs[0] == Expr::int(2)
                && fs[1] == Expr::Constant(NamedConstant::Pi)
            {
                return cmul(vec![Expr::int(2), Expr::ln_2pi_half()]);
            }
            // products the exp splitter has pulled apart fold back to sums
            // (ln(e*e^w) = w + 1); other products stay whole
            if fs
                .iter()
                .all(|f| matches!(f, Expr::Exp(_) | Expr::Constant(NamedConstant::E)))
            {
                let parts = fs
                    .into_iter()
                    .map(|f| match f {
                        Expr::Exp(a) => *a,
                        _ => Expr::int(1),
                    })
                    .collect();
                return csum(parts);
            }
            Ok(Expr::Ln(Box::new(Expr::Product(fs))))
        }
        other => Ok(Expr::Ln(Box::new(other))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum GammaKind {
    Gamma,
    LnGamma,
    Psi,
}

/// Gamma-family canonicalization: exact values at positive integers and
/// recurrence shifts for arguments of the form `x + n`.
pub(crate) fn cgamma(kind: GammaKind, arg: Expr) -> Result<Expr> {
    if let Expr::Rational(r) = &arg {
        if r.is_integer() {
            if !r.is_positive() {
                return Err(Error::Domain(format!(
                    "gamma-family pole at non-positive integer {r}"
                )));
            }
            if let Some(n) = r.to_i64().filter(|n| *n <= 400) {
                return match kind {
                    GammaKind::Gamma => Ok(Expr::Rational(factorial(n - 1))),
                    GammaKind::LnGamma => cln(Expr::Rational(factorial(n - 1))),
                    GammaKind::Psi => {
                        let mut h = Rational::zero();
                        for i in 1..n {
                            h += &Rational::new(1, i);
                        }
                        csum(vec![
                            Expr::Rational(h),
                            build_term(Rational::int(-1), vec![Expr::euler_gamma()]),
                        ])
                    }
                };
            }
        }
        return Ok(wrap_gamma(kind, arg));
    }
    // shift integer offsets out: f(x + n) -> recurrence on f(x)
    let (r, sym) = split_exponent(&arg)?;
    if let Some(x) = sym {
        let n = r.floor();
        if n.is_positive() && n.is_integer() {
            if let Some(n) = n.to_i64().filter(|n| *n <= 64) {
                let frac = &r - &Rational::int(n);
                let low = if frac.is_zero() {
                    x.clone()
                } else {
                    csum(vec![x.clone(), Expr::Rational(frac)])?
                };
                let head = cgamma(kind, low.clone())?;
                let mut shifts = Vec::with_capacity(n as usize);
                for i in 0..n {
                    let xi = csum(vec![low.clone(), Expr::int(i)])?;
                    shifts.push(match kind {
                        GammaKind::Gamma => xi,
                        GammaKind::LnGamma => cln(xi)?,
                        GammaKind::Psi => cpow(xi, Expr::int(-1))?,
                    });
                }
                return match kind {
                    GammaKind::Gamma => {
                        let mut fs = vec![head];
                        fs.extend(shifts);
                        cmul(fs)
                    }
                    _ => {
                        let mut ts = vec![head];
                        ts.extend(shifts);
                        csum(ts)
                    }
                };
            }
        }
    }
    Ok(wrap_gamma(kind, arg))
}

fn wrap_gamma(kind: GammaKind, arg: Expr) -> Expr {
    let b = Box::new(arg);
    match kind {
        GammaKind::Gamma => Expr::Gamma(b),
        GammaKind::LnGamma => Expr::LnGamma(b),
        GammaKind::Psi => Expr::Psi(b),
    }
}

fn factorial(n: i64) -> Rational {
    let mut acc = Rational::one();
    for i in 2..=n {
        acc *= &Rational::int(i);
    }
    acc
}

/// Conservative syntactic positivity (free variables read as positive).
pub(crate) fn syntactically_positive(e: &Expr) -> bool {
    match e {
        Expr::Rational(r) => r.is_positive(),
        Expr::Constant(NamedConstant::ZetaAt(_)) => false,
        Expr::Constant(_) => true,
        Expr::Omega | Expr::Omega1 | Expr::Var(_) => true,
        Expr::DOmega1(_) => false,
        Expr::Sum(ts) | Expr::Product(ts) => ts.iter().all(syntactically_positive),
        Expr::Power(b, _) => syntactically_positive(b),
        Expr::Exp(_) => true,
        Expr::Gamma(a) => syntactically_positive(a),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Ordering
// ---------------------------------------------------------------------------

/// Lexicographic growth estimate for a canonical term, used only for
/// deterministic ordering (not for semantic dominance judgements).
/// The continuum axis (`W` and its derivatives) outranks every germ axis:
/// `W` counts the reals in a unit interval while the germ axes count
/// subsets of a countable sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct GrowthKey {
    /// term contains an atom whose growth leaves the basis (x^w, Gamma(w)...)
    pub opq: i64,
    /// combined degree in W and dW(n)
    pub w1tot: Rational,
    /// rational multiple r of w in e^(r w)
    pub eexp: Rational,
    /// w raised to a symbolic exponent
    pub symw: i64,
    /// rational exponent of w
    pub wexp: Rational,
    /// rational exponent of ln w
    pub lexp: Rational,
    /// total degree in free variables
    pub vdeg: Rational,
    /// exponent of ln(variable) factors (sub-polynomial variable growth)
    pub vlog: Rational,
    /// term has any non-rational content (constants sort after symbols)
    pub sym: i64,
    /// dW(n) degree, a minor key within the continuum axis
    pub dw1: i64,
}

impl GrowthKey {
    fn add(&mut self, other: &GrowthKey) {
        self.opq += other.opq;
        self.w1tot += &other.w1tot;
        self.eexp += &other.eexp;
        self.symw += other.symw;
        self.wexp += &other.wexp;
        self.lexp += &other.lexp;
        self.vdeg += &other.vdeg;
        self.vlog += &other.vlog;
        self.sym += other.sym;
        self.dw1 += other.dw1;
    }

    fn scale(&self, q: &Rational) -> GrowthKey {
        let sign = if q.is_negative() { -1 } else { 1 };
        GrowthKey {
            opq: self.opq * sign,
            w1tot: q * &self.w1tot,
            eexp: q * &self.eexp,
            symw: self.symw * sign,
            wexp: q * &self.wexp,
            lexp: q * &self.lexp,
            vdeg: q * &self.vdeg,
            vlog: q * &self.vlog,
            sym: self.sym * sign,
            dw1: self.dw1 * sign,
        }
    }
}

pub(crate) fn term_growth(term: &Expr) -> GrowthKey {
    let mut key = GrowthKey::default();
    let (_, fs) = term.split_coeff();
    for f in &fs {
        key.add(&factor_growth(f));
    }
    if !fs.is_empty() {
        key.sym = 1;
    }
    key
}

fn factor_growth(f: &Expr) -> GrowthKey {
    let mut key = GrowthKey::default();
    match f {
        Expr::Omega => key.wexp = Rational::one(),
        Expr::Omega1 => key.w1tot = Rational::one(),
        Expr::DOmega1(_) => {
            key.w1tot = Rational::one();
            key.dw1 = 1;
        }
        Expr::Var(_) => key.vdeg = Rational::one(),
        Expr::Ln(a) if a.contains_omega_family() => key.lexp = Rational::one(),
        Expr::Ln(a) if !a.free_vars().is_empty() => key.vlog = Rational::one(),
        Expr::Exp(a) => {
            if a.contains_omega_family() {
                match omega_multiple(a) {
                    Some(r) => key.eexp = r,
                    None => key.opq = 1,
                }
            }
        }
        Expr::Gamma(a) if a.contains_omega_family() => key.opq = 1,
        Expr::LnGamma(a) if a.contains_omega_family() => {
            key.wexp = Rational::one();
            key.lexp = Rational::one();
        }
        Expr::Psi(a) if a.contains_omega_family() => key.lexp = Rational::one(),
        Expr::Power(b, x) => {
            let xr = x.as_rational();
            match (&**b, xr) {
                (Expr::Omega, Some(q)) => key.wexp = q.clone(),
                (Expr::Omega, None) => {
                    key.symw = 1;
                    if let Expr::Sum(ts) = &**x {
                        for t in ts {
                            if let Expr::Rational(r) = t {
                                key.wexp = r.clone();
                            }
                        }
                    }
                }
                (Expr::Omega1, Some(q)) => key.w1tot = q.clone(),
                (Expr::Omega1, None) => key.opq = 1,
                (Expr::DOmega1(_), Some(q)) => {
                    key.w1tot = q.clone();
                    key.dw1 = q.to_i64().unwrap_or(1);
                }
                (Expr::Var(_), Some(q)) => key.vdeg = q.clone(),
                (Expr::Ln(a), Some(q)) if a.contains_omega_family() => key.lexp = q.clone(),
                (Expr::Ln(a), Some(q)) if !a.free_vars().is_empty() => key.vlog = q.clone(),
                (Expr::Sum(ts), Some(q)) => {
                    let inner = ts.iter().map(term_growth).max().unwrap_or_default();
                    key = inner.scale(q);
                }
                (base, _) => {
                    if !base.contains_omega_family() && x.contains_omega_family() {
                        key.opq = 1; // x^w, 2^w, alpha^w
                    } else if base.contains_omega_family() {
                        key.opq = 1; // mixed atoms such as w^W
                    }
                }
            }
        }
        _ => {}
    }
    key
}

/// The rational r such that `a = r * w`, if `a` has that shape.
fn omega_multiple(a: &Expr) -> Option<Rational> {
    match a {
        Expr::Omega => Some(Rational::one()),
        Expr::Product(fs) => match fs.as_slice() {
            [Expr::Rational(r), Expr::Omega] => Some(r.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// Display rank of a product factor; the exact order the corpus prints.
fn factor_rank(f: &Expr) -> u8 {
    let base = match f {
        Expr::Power(b, _) => &**b,
        other => other,
    };
    match base {
        Expr::Constant(_) => 1,
        Expr::Rational(_) => 2,
        Expr::Var(_) => 3,
        Expr::Omega1 => 4,
        Expr::Omega => 5,
        Expr::DOmega1(_) => 6,
        Expr::Ln(_) => 7,
        Expr::Exp(_) => 8,
        Expr::Gamma(_) | Expr::LnGamma(_) | Expr::Psi(_) => 9,
        _ => 10,
    }
}

pub(crate) fn factor_cmp(a: &Expr, b: &Expr) -> std::cmp::Ordering {
    factor_rank(a).cmp(&factor_rank(b)).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{add, mul, pow, sub};

    fn canon(e: &Expr) -> Expr {
        canonicalize(e).unwrap()
    }

    #[test]
    fn rational_folding() {
        let e = Expr::Sum(vec![Expr::rat(1, 2), Expr::rat(1, 3)]);
        assert_eq!(canon(&e), Expr::rat(5, 6));
        let e = Expr::Product(vec![Expr::rat(2, 3), Expr::rat(3, 2)]);
        assert_eq!(canon(&e), Expr::int(1));
    }

    #[test]
    fn zero_and_one_laws() {
        let w = Expr::Omega;
        assert_eq!(mul(&w, &Expr::int(0)).unwrap(), Expr::int(0));
        assert_eq!(mul(&w, &Expr::int(1)).unwrap(), w);
        assert_eq!(add(&w, &Expr::int(0)).unwrap(), w);
        assert_eq!(pow(&Expr::int(0), &Expr::int(0)).unwrap(), Expr::int(1));
        assert_eq!(pow(&w, &Expr::int(0)).unwrap(), Expr::int(1));
    }

    #[test]
    fn like_terms_combine() {
        let w = Expr::Omega;
        let two_w = mul(&Expr::int(2), &w).unwrap();
        let sum = add(&two_w, &w).unwrap();
        assert_eq!(sum, mul(&Expr::int(3), &w).unwrap());
        assert_eq!(sub(&w, &w).unwrap(), Expr::int(0));
    }

    #[test]
    fn same_base_powers_merge() {
        let w = Expr::Omega;
        let a = pow(&w, &Expr::rat(1, 2)).unwrap();
        let prod = mul(&a, &a).unwrap();
        assert_eq!(prod, w);
        let inv = pow(&w, &Expr::int(-1)).unwrap();
        assert_eq!(mul(&w, &inv).unwrap(), Expr::int(1));
    }

    #[test]
    fn rational_base_extracts_rational_exponent_part() {
        // 2^(w+1) = 2 * 2^w
        let e = pow(&Expr::int(2), &add(&Expr::Omega, &Expr::int(1)).unwrap()).unwrap();
        let expected =
            mul(&Expr::int(2), &pow(&Expr::int(2), &Expr::Omega).unwrap()).unwrap();
        assert_eq!(e, expected);
        // and the split form is stable under re-multiplication
        assert_eq!(canon(&e), e);
    }

    #[test]
    fn symbolic_base_keeps_merged_exponent() {
        // w^(c-1) stays a single power
        let c = Expr::var("c");
        let e = pow(&Expr::Omega, &sub(&c, &Expr::int(1)).unwrap()).unwrap();
        match &e {
            Expr::Power(b, _) => assert_eq!(**b, Expr::Omega),
            other => panic!("expected power, got {other:?}"),
        }
        // and w * w^(c-1) = w^c
        let merged = mul(&Expr::Omega, &e).unwrap();
        assert_eq!(merged, pow(&Expr::Omega, &c).unwrap());
    }

    #[test]
    fn radical_scaling_matches_corpus_form() {
        // (1/2) sqrt(4w + 1/3) -> (1/6) sqrt(36w + 3)
        let inner = add(&mul(&Expr::int(4), &Expr::Omega).unwrap(), &Expr::rat(1, 3)).unwrap();
        let root = pow(&inner, &Expr::rat(1, 2)).unwrap();
        let e = mul(&Expr::rat(1, 2), &root).unwrap();

        let expected_inner =
            add(&mul(&Expr::int(36), &Expr::Omega).unwrap(), &Expr::int(3)).unwrap();
        let expected = mul(
            &Expr::rat(1, 6),
            &pow(&expected_inner, &Expr::rat(1, 2)).unwrap(),
        )
        .unwrap();
        assert_eq!(e, expected);
        // canonicalization is idempotent on the result
        assert_eq!(canon(&e), e);
    }

    #[test]
    fn exp_ln_inverse_pair() {
        let x = add(&Expr::Omega, &Expr::int(1)).unwrap();
        let e = canonicalize(&Expr::Exp(Box::new(Expr::Ln(Box::new(x.clone()))))).unwrap();
        assert_eq!(e, x);
        let l = canonicalize(&Expr::Ln(Box::new(Expr::Exp(Box::new(x.clone()))))).unwrap();
        assert_eq!(l, x);
    }

    #[test]
    fn exp_splits_rational_part_and_absorbs_logs() {
        // e^(k+1) = e * e^k
        let k = Expr::var("k");
        let e = canonicalize(&Expr::Exp(Box::new(add(&k, &Expr::int(1)).unwrap()))).unwrap();
        let expected = mul(
            &Expr::euler_e(),
            &canonicalize(&Expr::Exp(Box::new(k.clone()))).unwrap(),
        )
        .unwrap();
        assert_eq!(e, expected);
        // stable under another round of canonicalization
        assert_eq!(canon(&e), e);
        // e^(t ln w) = w^t
        let t = Expr::var("t");
        let arg = mul(&t, &Expr::Ln(Box::new(Expr::Omega))).unwrap();
        let e = canonicalize(&Expr::Exp(Box::new(arg))).unwrap();
        assert_eq!(e, pow(&Expr::Omega, &t).unwrap());
        // e^k * e^(-k) = 1
        let ek = canonicalize(&Expr::Exp(Box::new(k.clone()))).unwrap();
        let emk =
            canonicalize(&Expr::Exp(Box::new(mul(&Expr::int(-1), &k).unwrap()))).unwrap();
        assert_eq!(mul(&ek, &emk).unwrap(), Expr::int(1));
    }

    #[test]
    fn ln_two_pi_folds_to_named_constant() {
        let two_pi = mul(&Expr::int(2), &Expr::pi()).unwrap();
        let e = canonicalize(&Expr::Ln(Box::new(two_pi))).unwrap();
        assert_eq!(e, mul(&Expr::int(2), &Expr::ln_2pi_half()).unwrap());
    }

    #[test]
    fn gamma_family_shifts() {
        // lnGamma(w+1) = lnGamma(w) + ln(w)
        let arg = add(&Expr::Omega, &Expr::int(1)).unwrap();
        let e = canonicalize(&Expr::LnGamma(Box::new(arg))).unwrap();
        let expected = add(
            &Expr::LnGamma(Box::new(Expr::Omega)),
            &Expr::Ln(Box::new(Expr::Omega)),
        )
        .unwrap();
        assert_eq!(e, expected);
        // psi(5) = 1 + 1/2 + 1/3 + 1/4 - gamma
        let e = canonicalize(&Expr::Psi(Box::new(Expr::int(5)))).unwrap();
        let expected = sub(&Expr::rat(25, 12), &Expr::euler_gamma()).unwrap();
        assert_eq!(e, expected);
        // Gamma(6) = 120
        let e = canonicalize(&Expr::Gamma(Box::new(Expr::int(6)))).unwrap();
        assert_eq!(e, Expr::int(120));
    }

    #[test]
    fn zeta_reduction() {
        assert_eq!(Expr::zeta_at(Rational::int(0)), Expr::rat(-1, 2));
        assert_eq!(Expr::zeta_at(Rational::int(-1)), Expr::rat(-1, 12));
        assert_eq!(Expr::zeta_at(Rational::int(-2)), Expr::int(0));
        assert_eq!(Expr::zeta_at(Rational::int(-3)), Expr::rat(1, 120));
        assert!(matches!(
            Expr::zeta_at(Rational::int(2)),
            Expr::Constant(NamedConstant::ZetaAt(_))
        ));
    }

    #[test]
    fn distribution_is_full() {
        // (w+1)(w-1) = w^2 - 1
        let a = add(&Expr::Omega, &Expr::int(1)).unwrap();
        let b = sub(&Expr::Omega, &Expr::int(1)).unwrap();
        let prod = mul(&a, &b).unwrap();
        let expected =
            sub(&pow(&Expr::Omega, &Expr::int(2)).unwrap(), &Expr::int(1)).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn sum_ordering_puts_growth_first() {
        // w - 1/2 prints with w first; growth key drives the order
        let e = add(&Expr::rat(-1, 2), &Expr::Omega).unwrap();
        match &e {
            Expr::Sum(ts) => {
                assert_eq!(ts[0], Expr::Omega);
                assert_eq!(ts[1], Expr::rat(-1, 2));
            }
            other => panic!("expected sum, got {other:?}"),
        }
    }

    #[test]
    fn binomial_expansion() {
        // (w + 1/2)^4 expands fully
        let b = add(&Expr::Omega, &Expr::rat(1, 2)).unwrap();
        let e = pow(&b, &Expr::int(4)).unwrap();
        let w2 = pow(&Expr::Omega, &Expr::int(2)).unwrap();
        let w3 = pow(&Expr::Omega, &Expr::int(3)).unwrap();
        let w4 = pow(&Expr::Omega, &Expr::int(4)).unwrap();
        let expected = add(
            &add(&w4, &mul(&Expr::int(2), &w3).unwrap()).unwrap(),
            &add(
                &add(
                    &mul(&Expr::rat(3, 2), &w2).unwrap(),
                    &mul(&Expr::rat(1, 2), &Expr::Omega).unwrap(),
                )
                .unwrap(),
                &Expr::rat(1, 16),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn pow_errors() {
        assert!(pow(&Expr::int(0), &Expr::int(-1)).is_err());
        assert!(canonicalize(&Expr::Ln(Box::new(Expr::int(0)))).is_err());
        assert!(canonicalize(&Expr::Gamma(Box::new(Expr::int(0)))).is_err());
    }
}
