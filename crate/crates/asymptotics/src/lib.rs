//! Asymptotic normal forms at the infinite germ `w`.
//!
//! An exact expression is expanded into a finite sum of transmonomials
//! `B^(r w) * w^q * ln(w)^m * W^s * dW(n)^j` with exact symbolic
//! coefficients, ordered by growth, plus an explicit truncation floor.
//! Everything downstream (numerosity inversion, surreal integration,
//! divergent series) works on these normal forms.

pub mod expand;
pub mod integral;
pub mod inverse;
pub mod monomial;
pub mod normal_form;

pub use expand::expand;
pub use integral::improper_integral_to_surreal;
pub use inverse::asymptotic_inverse;
pub use monomial::{Class, Monomial};
pub use normal_form::{NormalForm, SurrealParts, Transmonomial};
