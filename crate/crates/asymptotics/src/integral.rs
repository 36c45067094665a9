//! Improper integrals over [a, infinity) mapped to exact germ values.

use surreal_core::expr::{self, antiderivative};
use surreal_core::{Expr, Rational, Result};

/// Evaluate the improper integral of `integrand` (in `var`) from `lower` to
/// infinity as the germ G(w) - G(lower), where G is a symbolic
/// antiderivative. The value depends on `lower`, which must lie in the
/// integrand's domain (substituting it must stay finite).
pub fn improper_integral_to_surreal(
    integrand: &Expr,
    var: &str,
    lower: &Rational,
) -> Result<Expr> {
    let g = antiderivative(integrand, var)?;
    let at_omega = g.substitute(var, &Expr::Omega)?;
    let at_lower = g.substitute(var, &Expr::Rational(lower.clone()))?;
    expr::sub(&at_omega, &at_lower)
}
