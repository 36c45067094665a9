//! Arbitrary-precision numeric evaluation of expressions.
//!
//! Evaluation binds free variables (and the germ variable `w`) to exact
//! rationals and computes with [`astro_float`] at a working precision
//! comfortably above the requested significant digits. `W` and `dW(n)` have
//! no real value and refuse to evaluate.

pub mod special;

use crate::error::{Error, Result};
use crate::expr::{Expr, NamedConstant};
use crate::rational::Rational;
use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use std::collections::BTreeMap;

const RM: RoundingMode = RoundingMode::ToEven;

/// Extra digits carried internally beyond what the caller asked for.
const GUARD_DIGITS: u32 = 12;

/// Exact bindings for free variables; bind `w` here to evaluate germs.
pub type Bindings = BTreeMap<String, Rational>;

/// Working precision in bits for a digit request.
pub(crate) fn bits(digits: u32) -> usize {
    (((digits + GUARD_DIGITS) as f64) * std::f64::consts::LOG2_10).ceil() as usize + 32
}

pub(crate) fn big_from_rational(r: &Rational, p: usize, cc: &mut Consts) -> BigFloat {
    let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p, RM, cc);
    let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p, RM, cc);
    n.div(&d, p, RM)
}

/// Evaluate `e` to `digits` significant digits.
pub fn eval_numeric(e: &Expr, bindings: &Bindings, digits: u32) -> Result<BigFloat> {
    let p = bits(digits);
    let mut cc = Consts::new().map_err(|_| Error::Internal("constants cache".into()))?;
    let v = eval(e, bindings, p, &mut cc)?;
    if v.is_nan() {
        return Err(Error::Domain("evaluation produced NaN".into()));
    }
    Ok(v)
}

fn eval(e: &Expr, env: &Bindings, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    Ok(match e {
        Expr::Rational(r) => big_from_rational(r, p, cc),
        Expr::Constant(c) => match c {
            NamedConstant::Pi => cc.pi(p, RM),
            NamedConstant::E => BigFloat::from_u64(1, p).exp(p, RM, cc),
            NamedConstant::EulerGamma => special::euler_gamma(p, cc),
            NamedConstant::Ln2PiHalf => {
                let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, p), p, RM);
                two_pi.ln(p, RM, cc).div(&BigFloat::from_u64(2, p), p, RM)
            }
            NamedConstant::ZetaAt(q) => {
                let s = big_from_rational(q, p, cc);
                special::zeta(&s, p, cc)?
            }
        },
        Expr::Omega => lookup(env, "w", p, cc)?,
        Expr::Omega1 => return Err(Error::UnboundSymbol("W".into())),
        Expr::DOmega1(_) => return Err(Error::UnboundSymbol("dW".into())),
        Expr::Var(name) => lookup(env, name, p, cc)?,
        Expr::Sum(ts) => {
            let mut acc = BigFloat::from_u64(0, p);
            for t in ts {
                acc = acc.add(&eval(t, env, p, cc)?, p, RM);
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = BigFloat::from_u64(1, p);
            for f in fs {
                acc = acc.mul(&eval(f, env, p, cc)?, p, RM);
            }
            acc
        }
        Expr::Power(b, x) => {
            let bv = eval(b, env, p, cc)?;
            power(&bv, x, env, p, cc)?
        }
        Expr::Exp(a) => eval(a, env, p, cc)?.exp(p, RM, cc),
        Expr::Ln(a) => {
            let av = eval(a, env, p, cc)?;
            if av.is_negative() || av.is_zero() {
                return Err(Error::Domain("ln of a non-positive value".into()));
            }
            av.ln(p, RM, cc)
        }
        Expr::Gamma(a) => {
            let av = eval(a, env, p, cc)?;
            special::ln_gamma(&av, p, cc)?.exp(p, RM, cc)
        }
        Expr::LnGamma(a) => {
            let av = eval(a, env, p, cc)?;
            special::ln_gamma(&av, p, cc)?
        }
        Expr::Psi(a) => {
            let av = eval(a, env, p, cc)?;
            special::digamma(&av, p, cc)?
        }
    })
}

fn lookup(env: &Bindings, name: &str, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    env.get(name)
        .map(|r| big_from_rational(r, p, cc))
        .ok_or_else(|| Error::UnboundSymbol(name.to_string()))
}

fn power(
    base: &BigFloat,
    exponent: &Expr,
    env: &Bindings,
    p: usize,
    cc: &mut Consts,
) -> Result<BigFloat> {
    // negative bases only support rational exponents with odd denominator
    if let Expr::Rational(rx) = exponent {
        if base.is_zero() {
            return if rx.is_negative() {
                Err(Error::Pow("zero raised to a negative power".into()))
            } else if rx.is_zero() {
                Ok(BigFloat::from_u64(1, p))
            } else {
                Ok(BigFloat::from_u64(0, p))
            };
        }
        if base.is_negative() {
            use num_traits::ToPrimitive;
            let denom_odd = (rx.denom() % 2u8).to_i64() != Some(0);
            if !denom_odd {
                return Err(Error::Domain("even root of a negative value".into()));
            }
            let mag = base.abs();
            let xv = eval(exponent, env, p, cc)?;
            let v = mag.pow(&xv, p, RM, cc);
            let numer_odd = (rx.numer() % 2u8).to_i64() != Some(0);
            return Ok(if numer_odd { v.neg() } else { v });
        }
    }
    if base.is_negative() || base.is_zero() {
        let xv = eval(exponent, env, p, cc)?;
        if base.is_zero() && !xv.is_negative() && !xv.is_zero() {
            return Ok(BigFloat::from_u64(0, p));
        }
        return Err(Error::Domain(
            "power with non-positive base and symbolic exponent".into(),
        ));
    }
    let xv = eval(exponent, env, p, cc)?;
    Ok(base.pow(&xv, p, RM, cc))
}

/// Render to exactly `digits` significant digits, as plain decimal when the
/// magnitude is moderate and as `d.dd...e+xx` otherwise.
pub fn to_decimal_string(x: &BigFloat, digits: u32) -> String {
    let digits = digits.max(1) as usize;
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    let neg = x.is_negative();
    // astro-float renders mantissa digits in scientific form: d.ddd...e+nn
    let raw = format!("{}", x.abs());
    let (mantissa_part, exp_part) = match raw.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (raw.clone(), 0),
    };
    let mut ds: Vec<u8> = Vec::new();
    let mut exp10 = exp_part; // exponent of the leading digit
    let mut seen_point = false;
    let mut leading = true;
    for ch in mantissa_part.bytes() {
        match ch {
            b'.' => seen_point = true,
            b'0'..=b'9' => {
                if leading && ch == b'0' {
                    if seen_point {
                        exp10 -= 1;
                    }
                    continue;
                }
                if leading {
                    leading = false;
                    if !seen_point {
                        // integer digits before the point shift the exponent
                    }
                } else if !seen_point {
                    exp10 += 1;
                }
                ds.push(ch - b'0');
            }
            _ => {}
        }
    }
    if ds.is_empty() {
        return "0".to_string();
    }
    // round to `digits` significant digits
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && *ds.last().unwrap() == 0 {
        ds.pop();
    }
    let digit_str: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let body = if exp10 >= 0 && (exp10 as usize) < digits + 6 {
        let int_len = exp10 as usize + 1;
        if digit_str.len() <= int_len {
            let mut s = digit_str.clone();
            s.push_str(&"0".repeat(int_len - digit_str.len()));
            s
        } else {
            format!("{}.{}", &digit_str[..int_len], &digit_str[int_len..])
        }
    } else if (-6..0).contains(&exp10) {
        format!("0.{}{}", "0".repeat((-exp10 - 1) as usize), digit_str)
    } else if digit_str.len() == 1 {
        format!("{digit_str}e{exp10:+}")
    } else {
        format!("{}.{}e{:+}", &digit_str[..1], &digit_str[1..], exp10)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Convenience: evaluate and render in one step.
pub fn eval_to_string(e: &Expr, bindings: &Bindings, digits: u32) -> Result<String> {
    let v = eval_numeric(e, bindings, digits)?;
    Ok(to_decimal_string(&v, digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn eval_str(s: &str, digits: u32) -> String {
        eval_to_string(&parse(s).unwrap(), &Bindings::new(), digits).unwrap()
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(eval_str("1/4", 30), "0.25");
        assert_eq!(eval_str("-3/2", 30), "-1.5");
        assert_eq!(eval_str("10^6", 10), "1000000");
        assert_eq!(eval_str("0", 30), "0");
    }

    #[test]
    fn known_constants_to_thirty_digits() {
        assert_eq!(eval_str("pi", 30), "3.14159265358979323846264338328");
        assert_eq!(eval_str("e", 30), "2.71828182845904523536028747135");
        assert_eq!(eval_str("gamma", 30), "0.577215664901532860606512090082");
        // (1/2) ln(2 pi)
        assert_eq!(
            eval_str("ln(2*pi)/2", 30),
            "0.918938533204672741780329736406"
        );
        assert_eq!(eval_str("zeta(2)", 30), "1.64493406684822643647241516665");
        assert_eq!(eval_str("zeta(3)", 30), "1.20205690315959428539973816151");
    }

    #[test]
    fn functions_and_powers() {
        assert_eq!(eval_str("sqrt(2)", 25), "1.414213562373095048801689");
        assert_eq!(eval_str("2^10", 10), "1024");
        assert_eq!(eval_str("exp(ln(7))", 20), "7");
        assert_eq!(eval_str("Gamma(5)", 10), "24");
        assert_eq!(eval_str("lnGamma(1/2)", 25), "0.5723649429247000870717137");
        // psi(1/2) = -gamma - 2 ln 2
        assert_eq!(eval_str("psi(1/2)", 25), "-1.963510026021423479440976");
        assert_eq!(eval_str("(-8)^(1/3)", 10), "-2");
    }

    #[test]
    fn germ_evaluation_binds_w() {
        let mut env = Bindings::new();
        env.insert("w".to_string(), Rational::int(10));
        let e = parse("w - 1/2").unwrap();
        assert_eq!(eval_to_string(&e, &env, 10).unwrap(), "9.5");
        let e = parse("w^2 + w").unwrap();
        assert_eq!(eval_to_string(&e, &env, 10).unwrap(), "110");
    }

    #[test]
    fn unbound_symbols_refuse() {
        assert!(matches!(
            eval_numeric(&parse("W").unwrap(), &Bindings::new(), 10),
            Err(Error::UnboundSymbol(_))
        ));
        assert!(matches!(
            eval_numeric(&parse("x + 1").unwrap(), &Bindings::new(), 10),
            Err(Error::UnboundSymbol(_))
        ));
    }

    #[test]
    fn rendering_edge_cases() {
        assert_eq!(eval_str("1/3", 5), "0.33333");
        assert_eq!(eval_str("2/3", 5), "0.66667");
        assert_eq!(eval_str("999999/1000", 4), "1000");
        assert_eq!(eval_str("10^20", 10), "1e+20");
        assert_eq!(eval_str("10^20", 30), "100000000000000000000");
        assert_eq!(eval_str("10^-8", 10), "1e-8");
        assert_eq!(eval_str("1/64", 10), "0.015625");
    }
}
