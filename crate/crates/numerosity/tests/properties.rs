use proptest::prelude::*;
use surreal_core::expr::{self, canonicalize, diff, Expr};
use surreal_core::numeric::{eval_numeric, to_decimal_string, Bindings};
use surreal_core::rational::Rational;
use surreal_numerosity::{
    antidifference, count_oracle, full_numerosity, interval_numerosity,
    sequence_from_numerosity, Endpoint, Inclusion, IntervalSpec, SequenceTerm,
};

fn rat(n: i64, d: i64) -> Expr {
    Expr::Rational(Rational::new(n, d))
}

/// Polynomial bodies in `k` with a positive leading coefficient.
fn arb_poly_body(degrees: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Expr> {
    let coeff = (-3i64..=3, 1i64..=3);
    (
        degrees,
        (1i64..=4, 1i64..=3),
        prop::collection::vec(coeff, 4),
    )
        .prop_map(|(deg, lead, lower)| {
            let k = Expr::var("k");
            let mut terms = vec![expr::mul(
                &rat(lead.0, lead.1),
                &expr::pow(&k, &Expr::int(deg as i64)).unwrap(),
            )
            .unwrap()];
            for (p, (n, d)) in lower.iter().take(deg).enumerate() {
                terms.push(
                    expr::mul(&rat(*n, *d), &expr::pow(&k, &Expr::int(p as i64)).unwrap())
                        .unwrap(),
                );
            }
            expr::add_all(&terms).unwrap()
        })
}

fn arb_inclusion() -> impl Strategy<Value = Inclusion> {
    prop_oneof![
        Just(Inclusion::Included),
        Just(Inclusion::Excluded),
        Just(Inclusion::Half),
    ]
}

/// Count by scanning every index; panics if the scan span cannot certify
/// the count (the strategies keep slopes >= 1/3, so 3000 indices clear any
/// cutoff below 500).
fn scan_count(coeffs_body: &Expr, valid_from: u64, cutoff: &Rational) -> u64 {
    let mut n = 0;
    let mut last = Rational::int(0);
    for k in valid_from..valid_from + 3_000 {
        let mut env = Bindings::new();
        env.insert("k".to_string(), Rational::int(k as i64));
        let exact = eval_rational(coeffs_body, k);
        if exact <= *cutoff {
            n += 1;
        }
        last = exact;
    }
    assert!(last > *cutoff, "span too short for {coeffs_body}");
    n
}

/// Evaluate a rational-coefficient polynomial body exactly at integer `k`.
fn eval_rational(body: &Expr, k: u64) -> Rational {
    let at = body
        .substitute("k", &Expr::int(k as i64))
        .unwrap();
    canonicalize(&at)
        .unwrap()
        .as_rational()
        .expect("polynomial bodies evaluate to rationals")
        .clone()
}

fn eval_at_omega(e: &Expr, omega: i64) -> f64 {
    let bound = e
        .substitute_atom(&Expr::Omega, &Expr::int(omega))
        .unwrap();
    let x = eval_numeric(&bound, &Bindings::new(), 40).unwrap();
    to_decimal_string(&x, 20).parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The antidifference telescopes: F(k+1) - F(k) gives back the body
    /// exactly, and F starts at zero.
    #[test]
    fn antidifference_telescopes(body in arb_poly_body(0..=4)) {
        let term = SequenceTerm::new(&body).unwrap();
        let f = antidifference(&term).unwrap();
        let shifted = f
            .substitute("k", &expr::add(&Expr::var("k"), &Expr::int(1)).unwrap())
            .unwrap();
        let delta = canonicalize(&expr::sub(&shifted, &f).unwrap()).unwrap();
        prop_assert_eq!(&delta, &term.body);
        let at_zero = canonicalize(&f.substitute("k", &Expr::int(0)).unwrap()).unwrap();
        prop_assert!(at_zero.is_zero(), "F(0) = {}", at_zero);
    }

    /// Affine and quadratic growth always inverts exactly: substituting
    /// the numerosity back into the growth function returns w itself.
    #[test]
    fn exact_inverses_compose_to_w(body in arb_poly_body(1..=2)) {
        let term = SequenceTerm::new(&body).unwrap();
        let r = full_numerosity(&term, 2).unwrap();
        prop_assert!(r.exact);
        let g = diff(&antidifference(&term).unwrap(), "k").unwrap();
        let composed = canonicalize(&g.substitute("k", &r.full).unwrap()).unwrap();
        prop_assert_eq!(composed, Expr::Omega);
    }

    /// The fast counting oracle agrees with a literal scan of the terms.
    #[test]
    fn oracle_matches_a_literal_scan(
        body in arb_poly_body(1..=4),
        n in 0i64..=400,
        d in 1i64..=4,
    ) {
        let term = SequenceTerm::new(&body).unwrap();
        let cutoff = Rational::new(n, d);
        let fast = count_oracle(&term, &cutoff).unwrap();
        let slow = scan_count(&term.body, term.valid_from, &cutoff);
        prop_assert_eq!(fast, slow);
    }

    /// The germ evaluated at w = x stays within one of the exact count of
    /// indices k >= 0 whose term sits at or below x. The oracle counts
    /// from valid_from, so the indices below it — whose terms dip negative
    /// and land under any large cutoff — are added back.
    #[test]
    fn the_germ_tracks_the_count(body in arb_poly_body(1..=2)) {
        let term = SequenceTerm::new(&body).unwrap();
        let r = full_numerosity(&term, 2).unwrap();
        for cutoff in [10_000i64, 100_000] {
            let count = count_oracle(&term, &Rational::int(cutoff)).unwrap();
            let germ = eval_at_omega(&r.full, cutoff);
            prop_assert!(
                ((count + term.valid_from) as f64 - germ).abs() <= 1.0,
                "{} at {}: count {}, from {}, germ {}",
                term.body, cutoff, count, term.valid_from, germ
            );
        }
    }

    /// Affine germs round-trip: the sequence built from a*w + b counts
    /// back to exactly a*w + b.
    #[test]
    fn affine_germs_round_trip(a in 1i64..=6, p in 1i64..=4, b in -6i64..=6, q in 1i64..=4) {
        let germ = canonicalize(
            &expr::add(&expr::mul(&rat(a, p), &Expr::Omega).unwrap(), &rat(b, q)).unwrap(),
        )
        .unwrap();
        let term = sequence_from_numerosity(&germ).unwrap();
        let r = full_numerosity(&term, 2).unwrap();
        prop_assert!(r.exact);
        prop_assert_eq!(canonicalize(&r.full).unwrap(), germ);
    }

    /// Splitting an interval at an interior point with complementary
    /// inclusions splits its numerosity additively.
    #[test]
    fn interval_counts_add_across_a_seam(
        a in -20i64..=20,
        gap1 in 1i64..=20,
        gap2 in 1i64..=20,
        d in 1i64..=4,
        lo_inc in arb_inclusion(),
        hi_inc in arb_inclusion(),
        seam in 0usize..3,
    ) {
        let b = a + gap1;
        let c = b + gap2;
        let (left_seam, right_seam) = match seam {
            0 => (Inclusion::Included, Inclusion::Excluded),
            1 => (Inclusion::Excluded, Inclusion::Included),
            _ => (Inclusion::Half, Inclusion::Half),
        };
        let point = |n: i64| Endpoint::Value(Rational::new(n, d));
        let left = IntervalSpec::new(point(a), lo_inc, point(b), left_seam).unwrap();
        let right = IntervalSpec::new(point(b), right_seam, point(c), hi_inc).unwrap();
        let whole = IntervalSpec::new(point(a), lo_inc, point(c), hi_inc).unwrap();
        let sum = canonicalize(
            &expr::add(
                &interval_numerosity(&left).unwrap(),
                &interval_numerosity(&right).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        prop_assert_eq!(sum, interval_numerosity(&whole).unwrap());
    }
}
