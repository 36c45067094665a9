//! Symbolic kernel for surreal-valued numerosities.
//!
//! The crate models a fragment of the surreal numbers spanned by
//! transmonomials `e^(r*w) * w^q * ln(w)^m * W^s * dW(n)...`, where `w` is
//! the germ of the identity sequence, `W` the number of reals in a unit
//! interval, and `dW(n)` its n-th surreal derivative. On top of the exact
//! expression algebra it provides:
//!
//! * asymptotic normal forms with truncation-aware arithmetic,
//! * numerosities of real sequences and intervals,
//! * the surreal delta calculus and definite integrals of unbounded
//!   functions, and
//! * surreal values for classically divergent series.

pub mod bernoulli;
pub mod error;
pub mod expr;
pub mod numeric;
pub mod rational;

pub use error::{Error, Result};
pub use expr::{Expr, NamedConstant};
pub use rational::Rational;
