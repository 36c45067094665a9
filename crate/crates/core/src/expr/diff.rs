//! Symbolic differentiation.
//!
//! [`diff`] differentiates with respect to a named real variable, treating
//! `w`, `W` and `dW(n)` as constants. [`derive`] is the surreal derivative
//! `d/dw`: it sends `w -> 1`, `W -> dW` and `dW(n) -> dW(n+1)`, so repeated
//! application walks down the derivative tower of the continuum unit.

use super::{canonicalize, Expr};
use crate::error::{Error, Result};

/// What the derivative operator treats as the moving variable.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Wrt<'a> {
    Var(&'a str),
    OmegaFamily,
}

/// Derivative with respect to the real variable `var`.
pub fn diff(e: &Expr, var: &str) -> Result<Expr> {
    let raw = d(e, Wrt::Var(var))?;
    canonicalize(&raw)
}

/// Surreal derivative `d/dw`.
pub fn derive(e: &Expr) -> Result<Expr> {
    let raw = d(e, Wrt::OmegaFamily)?;
    canonicalize(&raw)
}

fn d(e: &Expr, wrt: Wrt) -> Result<Expr> {
    Ok(match e {
        Expr::Rational(_) | Expr::Constant(_) => Expr::int(0),
        Expr::Var(name) => match wrt {
            Wrt::Var(v) if v == name => Expr::int(1),
            _ => Expr::int(0),
        },
        Expr::Omega => match wrt {
            Wrt::OmegaFamily => Expr::int(1),
            Wrt::Var(_) => Expr::int(0),
        },
        Expr::Omega1 => match wrt {
            Wrt::OmegaFamily => Expr::DOmega1(1),
            Wrt::Var(_) => Expr::int(0),
        },
        Expr::DOmega1(n) => match wrt {
            Wrt::OmegaFamily => Expr::DOmega1(n + 1),
            Wrt::Var(_) => Expr::int(0),
        },
        Expr::Sum(ts) => {
            let parts = ts.iter().map(|t| d(t, wrt)).collect::<Result<Vec<_>>>()?;
            Expr::Sum(parts)
        }
        Expr::Product(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, fi) in fs.iter().enumerate() {
                let mut fac = Vec::with_capacity(fs.len());
                fac.push(d(fi, wrt)?);
                for (j, fj) in fs.iter().enumerate() {
                    if j != i {
                        fac.push(fj.clone());
                    }
                }
                terms.push(Expr::Product(fac));
            }
            Expr::Sum(terms)
        }
        Expr::Power(b, x) => {
            // (b^x)' = b^x (x' ln b + x b'/b)
            let db = d(b, wrt)?;
            let dx = d(x, wrt)?;
            let mut terms = Vec::new();
            if !dx.is_zero() {
                terms.push(Expr::Product(vec![
                    dx,
                    Expr::Ln(b.clone()),
                ]));
            }
            if !db.is_zero() {
                terms.push(Expr::Product(vec![
                    (**x).clone(),
                    db,
                    Expr::Power(b.clone(), Box::new(Expr::int(-1))),
                ]));
            }
            if terms.is_empty() {
                return Ok(Expr::int(0));
            }
            Expr::Product(vec![e.clone(), Expr::Sum(terms)])
        }
        Expr::Exp(a) => Expr::Product(vec![d(a, wrt)?, e.clone()]),
        Expr::Ln(a) => Expr::Product(vec![
            d(a, wrt)?,
            Expr::Power(a.clone(), Box::new(Expr::int(-1))),
        ]),
        Expr::Gamma(a) => Expr::Product(vec![d(a, wrt)?, e.clone(), Expr::Psi(a.clone())]),
        Expr::LnGamma(a) => Expr::Product(vec![d(a, wrt)?, Expr::Psi(a.clone())]),
        Expr::Psi(a) => {
            let da = d(a, wrt)?;
            if da.is_zero() {
                Expr::int(0)
            } else {
                return Err(Error::UnsupportedExpansion(
                    "the derivative of psi is outside the expression basis".to_string(),
                ));
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn dv(s: &str, v: &str) -> String {
        diff(&parse(s).unwrap(), v).unwrap().to_string()
    }

    fn dw(s: &str) -> String {
        derive(&parse(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn polynomials() {
        assert_eq!(dv("k^2", "k"), "2*k");
        assert_eq!(dv("k^3 - k", "k"), "3*k^2 - 1");
        assert_eq!(dv("7", "k"), "0");
        assert_eq!(dv("w*k", "k"), "w");
    }

    #[test]
    fn chain_and_product_rules() {
        assert_eq!(dv("ln(k^2+1)", "k"), "2*k/(k^2+1)");
        assert_eq!(dv("k*ln(k)", "k"), "ln(k) + 1");
        assert_eq!(dv("e^(2*k)", "k"), "2*e^(2*k)");
        assert_eq!(dv("2^k", "k"), "2^k*ln(2)");
        assert_eq!(dv("sqrt(k^2+1)", "k"), "k/sqrt(k^2+1)");
    }

    #[test]
    fn general_power_rule() {
        // d/dk k^k = k^k (ln k + 1)
        assert_eq!(dv("k^k", "k"), "k^k*ln(k) + k^k");
    }

    #[test]
    fn gamma_family() {
        assert_eq!(dv("lnGamma(k)", "k"), "psi(k)");
        assert_eq!(dv("Gamma(k)", "k"), "Gamma(k)*psi(k)");
        assert!(diff(&parse("psi(k)").unwrap(), "k").is_err());
    }

    #[test]
    fn surreal_derivative_tower() {
        assert_eq!(dw("w"), "1");
        assert_eq!(dw("w^2"), "2*w");
        assert_eq!(dw("W"), "dW");
        assert_eq!(dw("w*W"), "w*dW + W");
        assert_eq!(dw("dW"), "dW(2)");
        assert_eq!(dw("dW(2)"), "dW(3)");
        assert_eq!(dw("ln(w)"), "1/w");
        assert_eq!(dw("k"), "0");
    }

    #[test]
    fn surreal_derivative_of_power_tower_terms() {
        // d/dw [w ln(w) W] = ln(w) W + W + w ln(w) dW
        assert_eq!(dw("w*ln(w)*W"), "w*dW*ln(w) + W*ln(w) + W");
    }
}
