//! Rendering canonical expressions back to the input grammar.
//!
//! `parse(e.to_string())` reproduces `e` for every canonical expression.
//! Conventions: top-level sums are spaced (`w - 1/2`), nested sums are
//! compact (`w^(c-1)`); negative exponents render as divisions
//! (`pi*W/(w*ln(w)^2)`); `sqrt` is used whenever the exponent is 1/2 and the
//! base is a sum or a rational, while symbolic bases keep the caret form
//! (`w^(1/2)`).

use super::{Expr, NamedConstant};
use crate::rational::Rational;
use std::fmt;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, true))
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&constant_str(self))
    }
}

fn constant_str(c: &NamedConstant) -> String {
    match c {
        NamedConstant::Pi => "pi".to_string(),
        NamedConstant::E => "e".to_string(),
        NamedConstant::EulerGamma => "gamma".to_string(),
        NamedConstant::Ln2PiHalf => "(1/2)*ln(2*pi)".to_string(),
        NamedConstant::ZetaAt(q) => format!("zeta({q})"),
    }
}

fn render(e: &Expr, top: bool) -> String {
    match e {
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let (neg, body) = term_str(t);
                if i == 0 {
                    if neg {
                        out.push('-');
                    }
                } else if top {
                    out.push_str(if neg { " - " } else { " + " });
                } else {
                    out.push(if neg { '-' } else { '+' });
                }
                out.push_str(&body);
            }
            out
        }
        other => {
            let (neg, body) = term_str(other);
            if neg {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

/// Render a single canonical term as (sign, unsigned body).
fn term_str(t: &Expr) -> (bool, String) {
    let (c, fs) = t.split_coeff();
    let neg = c.is_negative();
    let c = c.abs();

    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    let p = c.numer();
    let q = c.denom();
    if *p != num_bigint::BigInt::from(1) {
        num.push(p.to_string());
    }
    if *q != num_bigint::BigInt::from(1) {
        den.push(q.to_string());
    }
    for f in &fs {
        match f {
            Expr::Power(b, x) => {
                if let Expr::Rational(r) = &**x {
                    if r.is_negative() {
                        let flipped = r.abs();
                        if flipped.is_one() {
                            den.push(factor_str(b));
                        } else {
                            den.push(power_str(b, &Expr::Rational(flipped)));
                        }
                        continue;
                    }
                }
                num.push(power_str(b, x));
            }
            other => num.push(factor_str(other)),
        }
    }
    if num.is_empty() {
        num.push("1".to_string());
    }
    let mut body = num.join("*");
    if !den.is_empty() {
        body.push('/');
        if den.len() == 1 {
            body.push_str(&den[0]);
        } else {
            body.push('(');
            body.push_str(&den.join("*"));
            body.push(')');
        }
    }
    (neg, body)
}

fn factor_str(f: &Expr) -> String {
    match f {
        Expr::Rational(r) => rational_atom(r),
        Expr::Constant(c) => constant_str(c),
        Expr::Omega => "w".to_string(),
        Expr::Omega1 => "W".to_string(),
        Expr::DOmega1(1) => "dW".to_string(),
        Expr::DOmega1(n) => format!("dW({n})"),
        Expr::Var(s) => s.clone(),
        Expr::Power(b, x) => power_str(b, x),
        Expr::Exp(a) => format!("e^{}", exponent_str(a)),
        Expr::Ln(a) => format!("ln({})", render(a, false)),
        Expr::Gamma(a) => format!("Gamma({})", render(a, false)),
        Expr::LnGamma(a) => format!("lnGamma({})", render(a, false)),
        Expr::Psi(a) => format!("psi({})", render(a, false)),
        Expr::Sum(_) | Expr::Product(_) => format!("({})", render(f, false)),
    }
}

fn power_str(b: &Expr, x: &Expr) -> String {
    // sqrt form for sums and rationals; symbolic bases keep the caret
    if let Expr::Rational(r) = x {
        if *r == Rational::new(1, 2) && matches!(b, Expr::Sum(_) | Expr::Rational(_)) {
            return format!("sqrt({})", render(b, false));
        }
    }
    format!("{}^{}", base_str(b), exponent_str(x))
}

fn base_str(b: &Expr) -> String {
    match b {
        Expr::Rational(r) => {
            if r.is_integer() && !r.is_negative() {
                r.to_string()
            } else {
                format!("({r})")
            }
        }
        Expr::Constant(NamedConstant::Ln2PiHalf) => format!("({})", NamedConstant::Ln2PiHalf),
        Expr::Sum(_) | Expr::Product(_) | Expr::Power(_, _) | Expr::Exp(_) => {
            format!("({})", render(b, false))
        }
        other => factor_str(other),
    }
}

fn exponent_str(x: &Expr) -> String {
    match x {
        Expr::Rational(r) => {
            if r.is_integer() && !r.is_negative() {
                r.to_string()
            } else {
                format!("({r})")
            }
        }
        Expr::Omega | Expr::Omega1 | Expr::Var(_) | Expr::DOmega1(_) => factor_str(x),
        Expr::Constant(c) if !matches!(c, NamedConstant::Ln2PiHalf) => constant_str(c),
        other => format!("({})", render(other, false)),
    }
}

fn rational_atom(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_string()
    } else {
        format!("({r})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::expr::{add, mul, pow, sub};

    fn roundtrip(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn corpus_forms() {
        // rendering conventions the identity corpus fixes
        let e = sub(&Expr::Omega, &Expr::rat(1, 2)).unwrap();
        assert_eq!(e.to_string(), "w - 1/2");

        let e = mul(
            &mul(&Expr::pi(), &Expr::var("alpha")).unwrap(),
            &mul(
                &mul(&Expr::var("c"), &Expr::Omega1).unwrap(),
                &pow(
                    &Expr::Omega,
                    &sub(&Expr::var("c"), &Expr::int(1)).unwrap(),
                )
                .unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(e.to_string(), "pi*alpha*c*W*w^(c-1)");

        assert_eq!(Expr::int(0).to_string(), "0");
    }

    #[test]
    fn radical_and_half() {
        let inner = add(
            &mul(&Expr::int(36), &Expr::Omega).unwrap(),
            &Expr::int(3),
        )
        .unwrap();
        let e = add(
            &mul(&Expr::rat(1, 6), &pow(&inner, &Expr::rat(1, 2)).unwrap()).unwrap(),
            &Expr::rat(1, 2),
        )
        .unwrap();
        assert_eq!(e.to_string(), "sqrt(36*w+3)/6 + 1/2");
    }

    #[test]
    fn caret_sqrt_for_symbol_base() {
        let e = add(
            &pow(&Expr::Omega, &Expr::rat(1, 2)).unwrap(),
            &Expr::rat(1, 2),
        )
        .unwrap();
        assert_eq!(e.to_string(), "w^(1/2) + 1/2");
    }

    #[test]
    fn stirling_line() {
        let e = parse("w*ln(w) - w + (1/2)*ln(2*pi)").unwrap();
        assert_eq!(e.to_string(), "w*ln(w) - w + (1/2)*ln(2*pi)");
    }

    #[test]
    fn division_forms() {
        assert_eq!(roundtrip("pi*W/(w*ln(w)^2)"), "pi*W/(w*ln(w)^2)");
        assert_eq!(roundtrip("w^2/pi^2"), "w^2/pi^2");
        assert_eq!(roundtrip("2^w/ln(2) - 1"), "2^w/ln(2) - 1");
        assert_eq!(roundtrip("1/w"), "1/w");
        assert_eq!(roundtrip("3*w/2"), "3*w/2");
    }

    #[test]
    fn nested_sums_are_compact() {
        assert_eq!(roundtrip("w^(c-1)"), "w^(c-1)");
        assert_eq!(roundtrip("ln(w+1)"), "ln(w+1)");
    }

    #[test]
    fn exp_forms() {
        assert_eq!(roundtrip("e^k"), "e^k");
        assert_eq!(roundtrip("e^(2*k)"), "e^(2*k)");
        assert_eq!(roundtrip("e^(k+1)"), "e*e^k");
        assert_eq!(roundtrip("exp(-k)"), "e^(-k)");
    }

    #[test]
    fn negative_leading_term() {
        assert_eq!(roundtrip("-w + 1"), "-w + 1");
        assert_eq!(roundtrip("-1/2"), "-1/2");
        assert_eq!(roundtrip("-w^2"), "-w^2");
    }

    #[test]
    fn dw_orders() {
        assert_eq!(roundtrip("dW"), "dW");
        assert_eq!(roundtrip("w*dW*ln(w)"), "w*dW*ln(w)");
        assert_eq!(roundtrip("dW(2)"), "dW(2)");
    }

    #[test]
    fn zeta_prints_as_call() {
        assert_eq!(roundtrip("zeta(3)"), "zeta(3)");
        assert_eq!(roundtrip("zeta(1/2)"), "zeta(1/2)");
        // non-positive integer points reduce on construction
        assert_eq!(roundtrip("zeta(-5)"), "-1/252");
        assert_eq!(roundtrip("zeta(0)"), "-1/2");
    }
}
