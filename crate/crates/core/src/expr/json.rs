//! Tagged-union JSON encoding of the expression AST.
//!
//! Every node is an object with a `kind` discriminator; rational components
//! are decimal strings so arbitrary-precision values survive the trip.
//! The shape is documented in `docs/ast-schema.json`.

use super::{canonicalize, Expr, NamedConstant};
use crate::error::{Error, Result};
use crate::rational::Rational;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::str::FromStr;

pub fn expr_to_json(e: &Expr) -> Value {
    match e {
        Expr::Rational(r) => json!({
            "kind": "rational",
            "numer": r.numer().to_string(),
            "denom": r.denom().to_string(),
        }),
        Expr::Constant(NamedConstant::ZetaAt(q)) => json!({
            "kind": "zeta",
            "at": { "numer": q.numer().to_string(), "denom": q.denom().to_string() },
        }),
        Expr::Constant(c) => json!({
            "kind": "constant",
            "name": match c {
                NamedConstant::Pi => "pi",
                NamedConstant::E => "e",
                NamedConstant::EulerGamma => "gamma",
                NamedConstant::Ln2PiHalf => "ln2pihalf",
                NamedConstant::ZetaAt(_) => unreachable!(),
            },
        }),
        Expr::Omega => json!({ "kind": "omega" }),
        Expr::Omega1 => json!({ "kind": "omega1" }),
        Expr::DOmega1(n) => json!({ "kind": "domega1", "order": n }),
        Expr::Var(name) => json!({ "kind": "var", "name": name }),
        Expr::Sum(ts) => json!({
            "kind": "sum",
            "terms": ts.iter().map(expr_to_json).collect::<Vec<_>>(),
        }),
        Expr::Product(fs) => json!({
            "kind": "product",
            "factors": fs.iter().map(expr_to_json).collect::<Vec<_>>(),
        }),
        Expr::Power(b, x) => json!({
            "kind": "power",
            "base": expr_to_json(b),
            "exponent": expr_to_json(x),
        }),
        Expr::Exp(a) => json!({ "kind": "exp", "arg": expr_to_json(a) }),
        Expr::Ln(a) => json!({ "kind": "ln", "arg": expr_to_json(a) }),
        Expr::Gamma(a) => json!({ "kind": "gamma", "arg": expr_to_json(a) }),
        Expr::LnGamma(a) => json!({ "kind": "lngamma", "arg": expr_to_json(a) }),
        Expr::Psi(a) => json!({ "kind": "psi", "arg": expr_to_json(a) }),
    }
}

pub fn expr_from_json(v: &Value) -> Result<Expr> {
    let raw = decode(v)?;
    canonicalize(&raw)
}

fn decode(v: &Value) -> Result<Expr> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("expected an object node"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing `kind` discriminator"))?;
    Ok(match kind {
        "rational" => Expr::Rational(rational_from(obj)?),
        "zeta" => {
            let at = obj
                .get("at")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("zeta node needs an `at` rational"))?;
            Expr::zeta_at(rational_from(at)?)
        }
        "constant" => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("constant node needs a `name`"))?;
            match name {
                "pi" => Expr::pi(),
                "e" => Expr::euler_e(),
                "gamma" => Expr::euler_gamma(),
                "ln2pihalf" => Expr::ln_2pi_half(),
                other => return Err(bad(&format!("unknown constant `{other}`"))),
            }
        }
        "omega" => Expr::Omega,
        "omega1" => Expr::Omega1,
        "domega1" => {
            let n = obj
                .get("order")
                .and_then(Value::as_u64)
                .filter(|n| (1..=64).contains(n))
                .ok_or_else(|| bad("domega1 order must be an integer in 1..=64"))?;
            Expr::DOmega1(n as u32)
        }
        "var" => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("var node needs a `name`"))?;
            Expr::Var(name.to_string())
        }
        "sum" => Expr::Sum(decode_list(obj, "terms")?),
        "product" => Expr::Product(decode_list(obj, "factors")?),
        "power" => {
            let b = obj.get("base").ok_or_else(|| bad("power needs `base`"))?;
            let x = obj
                .get("exponent")
                .ok_or_else(|| bad("power needs `exponent`"))?;
            Expr::Power(Box::new(decode(b)?), Box::new(decode(x)?))
        }
        "exp" => Expr::Exp(Box::new(decode_arg(obj)?)),
        "ln" => Expr::Ln(Box::new(decode_arg(obj)?)),
        "gamma" => Expr::Gamma(Box::new(decode_arg(obj)?)),
        "lngamma" => Expr::LnGamma(Box::new(decode_arg(obj)?)),
        "psi" => Expr::Psi(Box::new(decode_arg(obj)?)),
        other => return Err(bad(&format!("unknown node kind `{other}`"))),
    })
}

fn decode_arg(obj: &Map<String, Value>) -> Result<Expr> {
    let a = obj.get("arg").ok_or_else(|| bad("node needs an `arg`"))?;
    decode(a)
}

fn decode_list(obj: &Map<String, Value>, field: &str) -> Result<Vec<Expr>> {
    let items = obj
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(&format!("node needs a `{field}` array")))?;
    items.iter().map(decode).collect()
}

fn rational_from(obj: &Map<String, Value>) -> Result<Rational> {
    let numer = obj
        .get("numer")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("rational needs a string `numer`"))?;
    let denom = obj
        .get("denom")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("rational needs a string `denom`"))?;
    let n = BigInt::from_str(numer).map_err(|_| bad("unreadable numerator"))?;
    let d = BigInt::from_str(denom).map_err(|_| bad("unreadable denominator"))?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::from_big(n, d))
}

fn bad(msg: &str) -> Error {
    Error::Parse {
        offset: 0,
        expected: format!("valid AST JSON: {msg}"),
    }
}
