//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          -- right associative
//! atom   := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Decimal literals parse exactly (`0.3` is 3/10). `w` is the germ variable,
//! `W` the continuum unit, `dW` (optionally `dW(n)`) its derivatives; `pi`,
//! `e` and `gamma` are constants, every other bare name is a free variable.
//! Unknown function names fail with [`Error::UnsupportedFunction`] so callers
//! can distinguish "not in the supported class" from a malformed input.

use super::{canonicalize, Expr};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("end of input"));
    }
    canonicalize(&e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = Expr::Sum(vec![acc, rhs]);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = Expr::Sum(vec![
                    acc,
                    Expr::Product(vec![Expr::int(-1), rhs]),
                ]);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = Expr::Product(vec![acc, rhs]);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = Expr::Product(vec![
                    acc,
                    Expr::Power(Box::new(rhs), Box::new(Expr::int(-1))),
                ]);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr::Product(vec![Expr::int(-1), inner]));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Expr::Power(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                self.expect(b')', "closing parenthesis")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.name(),
            _ => Err(self.err("a number, name, or parenthesized expression")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.err("digits after the decimal point"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value = Rational::parse_decimal(text).ok_or_else(|| Error::Parse {
            offset: start,
            expected: "a numeric literal".to_string(),
        })?;
        self.skip_ws();
        Ok(Expr::Rational(value))
    }

    fn name(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .to_string();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            // dW(n) takes an integer order, zeta a rational point; every
            // other known head takes an expression argument.
            if name == "dW" {
                self.pos += 1;
                self.skip_ws();
                let arg = self.expr()?;
                self.expect(b')', "closing parenthesis")?;
                let n = canonicalize(&arg)?
                    .as_rational()
                    .filter(|r| r.is_integer() && r.is_positive())
                    .and_then(|r| r.to_i64())
                    .filter(|n| *n <= 64)
                    .ok_or(Error::Parse {
                        offset: start,
                        expected: "dW(n) with a positive integer order".to_string(),
                    })?;
                return Ok(Expr::DOmega1(n as u32));
            }
            let known = matches!(
                name.as_str(),
                "exp" | "ln" | "sqrt" | "Gamma" | "lnGamma" | "psi" | "zeta"
            );
            if !known {
                return Err(Error::UnsupportedFunction {
                    offset: start,
                    name,
                });
            }
            self.pos += 1;
            self.skip_ws();
            let arg = self.expr()?;
            self.expect(b')', "closing parenthesis")?;
            let e = match name.as_str() {
                "exp" => Expr::Exp(Box::new(arg)),
                "ln" => Expr::Ln(Box::new(arg)),
                "sqrt" => Expr::Power(Box::new(arg), Box::new(Expr::rat(1, 2))),
                "Gamma" => Expr::Gamma(Box::new(arg)),
                "lnGamma" => Expr::LnGamma(Box::new(arg)),
                "psi" => Expr::Psi(Box::new(arg)),
                "zeta" => {
                    let q = canonicalize(&arg)?
                        .as_rational()
                        .cloned()
                        .ok_or(Error::Parse {
                            offset: start,
                            expected: "zeta(q) with a rational point".to_string(),
                        })?;
                    if q.is_one() {
                        return Err(Error::Domain("zeta has a pole at 1".to_string()));
                    }
                    Expr::zeta_at(q)
                }
                _ => unreachable!("guarded by `known`"),
            };
            return Ok(e);
        }
        Ok(match name.as_str() {
            "w" => Expr::Omega,
            "W" => Expr::Omega1,
            "dW" => Expr::DOmega1(1),
            "pi" => Expr::pi(),
            "e" => Expr::euler_e(),
            "gamma" => Expr::euler_gamma(),
            _ => Expr::Var(name),
        })
    }
}
