//! The catalog of closed-form numerosities: every entry is checked exactly,
//! as a canonical expression, and the refined forms against the expected
//! leading germs.

use surreal_core::expr::parse;
use surreal_core::rational::Rational;
use surreal_numerosity::{
    full_numerosity, sequence_from_numerosity, NumerosityResult, SequenceTerm,
};

fn numerosity(src: &str) -> NumerosityResult {
    let term = SequenceTerm::new(&parse(src).unwrap()).unwrap();
    full_numerosity(&term, 2).unwrap()
}

fn full(src: &str) -> String {
    numerosity(src).full.to_string()
}

fn refined(src: &str) -> String {
    numerosity(src).refined.to_expr().unwrap().to_string()
}

#[test]
fn the_naturals_and_affine_progressions() {
    assert_eq!(full("k+1"), "w - 1/2");
    assert_eq!(full("k"), "w + 1/2");
    assert_eq!(full("2*k"), "w/2 + 1/2");
    assert_eq!(full("2*k+1"), "w/2");
    // a*k + b gives w/a + 1/2 - b/a; at a = 3, b = 2 that is w/3 - 1/6
    assert_eq!(full("3*k+2"), "w/3 - 1/6");
    assert_eq!(full("k/2 + 5"), "2*w - 19/2");
}

#[test]
fn the_squares_carry_a_radical_with_an_infinitesimal_tail() {
    let r = numerosity("k^2");
    assert!(r.exact);
    assert_eq!(r.full.to_string(), "sqrt(36*w+3)/6 + 1/2");
    assert_eq!(r.refined.to_expr().unwrap().to_string(), "w^(1/2) + 1/2");
}

#[test]
fn a_tuned_quadratic_counts_to_exactly_root_w() {
    let r = numerosity("1/3 + k + k^2");
    assert!(r.exact);
    assert_eq!(r.full.to_string(), "w^(1/2)");
    assert_eq!(r.refined.to_expr().unwrap().to_string(), "w^(1/2)");
}

#[test]
fn the_fourth_powers_nest_two_radicals() {
    let r = numerosity("k^4");
    assert!(r.exact);
    assert_eq!(
        r.full.to_string(),
        "sqrt(30*sqrt(900*w+30)+225)/30 + 1/2"
    );
    assert_eq!(r.refined.to_expr().unwrap().to_string(), "w^(1/4) + 1/2");
}

#[test]
fn the_cubes_invert_through_a_single_cube_root() {
    let r = numerosity("k^3");
    assert!(r.exact);
    assert_eq!(refined("k^3"), "w^(1/3) + 1/2");
    // the closed form solves g(k) = w exactly: check numerically at two germs
    let g = parse("k^3 - (3/2)*k^2 + k/2").unwrap();
    for omega in [1000i64, 1_000_000] {
        let k = eval_at(&r.full, omega);
        let composed = eval_expr_at_k(&g, k);
        assert!(
            (composed - omega as f64).abs() < 1e-6 * omega as f64,
            "g(full({omega})) = {composed}"
        );
    }
}

#[test]
fn geometric_sequences_invert_through_logarithms() {
    assert_eq!(full("2^k"), "ln(w/ln(2))/ln(2)");
    assert_eq!(full("3^k"), "ln(2*w/ln(3))/ln(3)");
    // a shifted, scaled geometric: 3*2^k + 5
    assert_eq!(full("3*2^k + 5"), "ln(w/(3*ln(2))-5/(3*ln(2)))/ln(2)");
    // the natural-base example: {e^(k+1) - e^k} has numerosity exactly ln w
    let r = numerosity("e^(k+1) - e^k");
    assert!(r.exact);
    assert_eq!(r.full.to_string(), "ln(w)");
}

#[test]
fn exact_inversions_compose_back_to_w() {
    // substituting the full numerosity for k in g must return w exactly
    for src in ["k+1", "3*k+2", "k^2", "1/3 + k + k^2", "k^4", "2^k", "e^(k+1) - e^k"] {
        let term = SequenceTerm::new(&parse(src).unwrap()).unwrap();
        let r = full_numerosity(&term, 2).unwrap();
        assert!(r.exact, "{src} should invert exactly");
        let f = surreal_numerosity::antidifference(&term).unwrap();
        let g = surreal_core::expr::diff(&f, "k").unwrap();
        let composed = g.substitute("k", &r.full).unwrap();
        assert_eq!(composed.to_string(), "w", "g(full) for {src}");
    }
}

#[test]
fn quintic_growth_falls_back_to_a_truncated_inverse() {
    let r = numerosity("k^5");
    assert!(!r.exact);
    assert!(r.refined.to_expr().unwrap().to_string().starts_with("w^(1/5)"));
    // the truncated inverse still tracks the oracle at a large cutoff
    let term = SequenceTerm::new(&parse("k^5").unwrap()).unwrap();
    let count = surreal_numerosity::count_oracle(&term, &Rational::int(1_000_000)).unwrap();
    let germ = eval_at(&r.full, 1_000_000);
    assert!((count as f64 - germ).abs() <= 1.0, "count {count} vs germ {germ}");
}

#[test]
fn mixed_quartics_without_symmetry_fall_back() {
    // g picks up an odd recentered part, so no biquadratic shortcut exists
    let r = numerosity("k^4 + k^3");
    assert!(!r.exact);
    assert!(r.refined.to_expr().unwrap().to_string().starts_with("w^(1/4)"));
}

#[test]
fn sequences_recovered_from_germs_round_trip() {
    for (germ, body, back) in [
        ("w", "k + 1/2", "w"),
        ("w^(1/2)", "k^2 + k + 1/3", "w^(1/2)"),
        ("ln(w)", "-e^k + e*e^k", "ln(w)"),
        ("w/3 - 1/6", "3*k + 2", "w/3 - 1/6"),
        ("5*w + 2", "k/5 - 3/10", "5*w + 2"),
    ] {
        let term = sequence_from_numerosity(&parse(germ).unwrap()).unwrap();
        assert_eq!(term.body.to_string(), body, "sequence for {germ}");
        let r = full_numerosity(&term, 2).unwrap();
        assert!(r.exact);
        assert_eq!(r.full.to_string(), back, "round trip of {germ}");
    }
}

#[test]
fn recovered_sequences_respect_reality_bounds() {
    // solving 2^w-style germs lands on logarithmic terms that only turn
    // real and non-negative past the first index
    let term = sequence_from_numerosity(&parse("2^w").unwrap()).unwrap();
    assert!(term.valid_from >= 1, "ln-based terms start later, got {}", term.valid_from);
    assert!(matches!(
        term.detected_class,
        surreal_numerosity::SequenceClass::Unsupported
    ));

    let term = sequence_from_numerosity(&parse("w^(2/3)").unwrap()).unwrap();
    assert_eq!(term.valid_from, 0);
    assert!(matches!(
        term.detected_class,
        surreal_numerosity::SequenceClass::Unsupported
    ));
}

#[test]
fn unsolvable_germs_are_reported() {
    use surreal_core::error::Error;
    for src in ["7", "W", "ln(w) + w", "-w", "1/w", "Gamma(w)"] {
        let err = sequence_from_numerosity(&parse(src).unwrap()).unwrap_err();
        assert!(
            matches!(err, Error::NotSolvable(_)),
            "{src} gave {err:?}"
        );
    }
}

fn eval_at(e: &surreal_core::Expr, omega: i64) -> f64 {
    use surreal_core::expr::Expr;
    use surreal_core::numeric::{eval_numeric, to_decimal_string, Bindings};
    let bound = e
        .substitute_atom(&Expr::Omega, &Expr::int(omega))
        .unwrap();
    let x = eval_numeric(&bound, &Bindings::new(), 40).unwrap();
    to_decimal_string(&x, 20).parse().unwrap()
}

fn eval_expr_at_k(e: &surreal_core::Expr, k: f64) -> f64 {
    use surreal_core::numeric::{eval_numeric, to_decimal_string, Bindings};
    // k is irrational in general; a 30-digit rational stand-in is plenty
    let approx = Rational::parse_decimal(&format!("{k:.12}")).unwrap();
    let mut env = Bindings::new();
    env.insert("k".to_string(), approx);
    let x = eval_numeric(e, &env, 40).unwrap();
    to_decimal_string(&x, 20).parse().unwrap()
}
