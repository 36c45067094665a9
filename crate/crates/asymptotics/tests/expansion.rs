use surreal_asymptotics::{asymptotic_inverse, expand, improper_integral_to_surreal};
use surreal_core::expr::parse;
use surreal_core::{Error, Rational};

fn expanded(src: &str, order: u32) -> String {
    expand(&parse(src).unwrap(), order)
        .unwrap()
        .to_expr()
        .unwrap()
        .to_string()
}

#[test]
fn exact_inputs_pass_through() {
    assert_eq!(expanded("w - 1/2", 0), "w - 1/2");
    assert_eq!(expanded("7", 3), "7");
    assert_eq!(expanded("0", 2), "0");
    assert_eq!(expanded("w*ln(w) - w + (1/2)*ln(2*pi)", 0), "w*ln(w) - w + (1/2)*ln(2*pi)");
    assert!(!expand(&parse("w - 1/2").unwrap(), 0).unwrap().is_truncated());
}

#[test]
fn quadratic_numerosity_radical() {
    let nf = expand(&parse("sqrt(36*w+3)/6 + 1/2").unwrap(), 1).unwrap();
    assert_eq!(nf.to_expr().unwrap().to_string(), "w^(1/2) + 1/2 + 1/(24*w^(1/2))");
    assert!(nf.is_truncated());
}

#[test]
fn quartic_numerosity_radical() {
    let nf = expand(&parse("sqrt(30*sqrt(900*w+30)+225)/30 + 1/2").unwrap(), 2).unwrap();
    let refined = nf.refine().unwrap();
    assert_eq!(refined.to_expr().unwrap().to_string(), "w^(1/4) + 1/2");
}

#[test]
fn refine_drops_only_infinitesimals() {
    let nf = expand(&parse("sqrt(36*w+3)/6 + 1/2").unwrap(), 2).unwrap();
    assert_eq!(nf.refine().unwrap().to_expr().unwrap().to_string(), "w^(1/2) + 1/2");
    let plain = expand(&parse("w").unwrap(), 2).unwrap();
    assert_eq!(plain.refine().unwrap().to_expr().unwrap().to_string(), "w");
}

#[test]
fn split_partitions_by_growth() {
    let parts = expand(&parse("w - 1/2").unwrap(), 0).unwrap().split().unwrap();
    assert_eq!(parts.infinite.to_expr().unwrap().to_string(), "w");
    assert_eq!(parts.finite.to_string(), "-1/2");
    assert!(parts.infinitesimal.is_zero());

    let parts = expand(&parse("0").unwrap(), 0).unwrap().split().unwrap();
    assert!(parts.infinite.is_zero());
    assert_eq!(parts.finite.to_string(), "0");
    assert!(parts.infinitesimal.is_zero());

    let parts = expand(&parse("sqrt(36*w+3)/6 + 1/2").unwrap(), 1).unwrap().split().unwrap();
    assert_eq!(parts.infinite.to_expr().unwrap().to_string(), "w^(1/2)");
    assert_eq!(parts.finite.to_string(), "1/2");
    assert_eq!(parts.infinitesimal.to_expr().unwrap().to_string(), "1/(24*w^(1/2))");
}

#[test]
fn split_recombines_exactly() {
    for src in ["w - 1/2", "sqrt(36*w+3)/6 + 1/2", "w^2 + 3 + ln(w)"] {
        let nf = expand(&parse(src).unwrap(), 2).unwrap();
        let rec = nf.split().unwrap().recombine().unwrap();
        assert_eq!(rec.terms(), nf.terms());
        assert_eq!(rec.floor(), nf.floor());
    }
}

#[test]
fn exponential_and_logarithmic_forms() {
    assert_eq!(expanded("e^(1/w)", 2), "1 + 1/w + 1/(2*w^2)");
    assert_eq!(expanded("ln(w^2 + w)", 1), "2*ln(w) + 1/w");
    assert_eq!(expanded("ln(2^w)", 0), "w*ln(2)");
    assert_eq!(expanded("2^w * 3^(-w)", 0), expanded("(2/3)^w", 0));
}

#[test]
fn stirling_expansions() {
    assert_eq!(
        expanded("lnGamma(w)", 1),
        "w*ln(w) - w - ln(w)/2 + (1/2)*ln(2*pi) + 1/(12*w)"
    );
    assert_eq!(expanded("psi(w)", 1), "ln(w) - 1/(2*w)");
    // lnGamma(w + 1) = lnGamma(w) + ln(w): check they agree at order 0
    let a = expanded("lnGamma(w+1) - lnGamma(w) - ln(w)", 0);
    assert_eq!(a, "0");
}

#[test]
fn continuum_axis_is_carried_verbatim() {
    assert_eq!(expanded("W*w + 3", 0), "W*w + 3");
    assert_eq!(expanded("dW(1)", 0), "dW");
    assert_eq!(expanded("pi*W/(w*ln(w)^2)", 0), "pi*W/(w*ln(w)^2)");
}

#[test]
fn unsupported_expansions_are_rejected() {
    for src in ["e^(w^2)", "Gamma(w)", "w^c", "ln(ln(w))", "e^(sqrt(w))"] {
        let err = expand(&parse(src).unwrap(), 0).unwrap_err();
        assert!(
            matches!(err, Error::UnsupportedExpansion(_)),
            "{src}: {err:?}"
        );
    }
    assert!(matches!(
        expand(&parse("ln(1/w - 1)").unwrap(), 0).unwrap_err(),
        Error::Domain(_)
    ));
}

#[test]
fn expand_is_idempotent_on_its_output() {
    for src in ["sqrt(36*w+3)/6 + 1/2", "lnGamma(w)", "e^(1/w)"] {
        let once = expand(&parse(src).unwrap(), 2).unwrap();
        let again = expand(&once.to_expr().unwrap(), 2).unwrap();
        assert_eq!(once.terms(), again.terms());
    }
}

#[test]
fn inverse_of_the_square_numbers() {
    let g = parse("k^2 - k + 1/6").unwrap();
    let inv = asymptotic_inverse(&g, "k", 1).unwrap();
    assert_eq!(inv.to_string(), "w^(1/2) + 1/2 + 1/(24*w^(1/2))");
}

#[test]
fn inverse_identity_and_exponential() {
    assert_eq!(
        asymptotic_inverse(&parse("k").unwrap(), "k", 0).unwrap().to_string(),
        "w"
    );
    assert_eq!(
        asymptotic_inverse(&parse("e^k").unwrap(), "k", 0).unwrap().to_string(),
        "ln(w)"
    );
    assert_eq!(
        asymptotic_inverse(&parse("2^k").unwrap(), "k", 0).unwrap().to_string(),
        "ln(w)/ln(2)"
    );
}

#[test]
fn inverse_rejects_degenerate_growth() {
    for src in ["1/k", "-k^2", "5", "W*k"] {
        let err = asymptotic_inverse(&parse(src).unwrap(), "k", 0).unwrap_err();
        assert!(matches!(err, Error::NotInvertible(_)), "{src}: {err:?}");
    }
}

#[test]
fn improper_integrals_land_on_germs() {
    let one = Rational::one();
    let zero = Rational::zero();
    assert_eq!(
        improper_integral_to_surreal(&parse("1/t").unwrap(), "t", &one)
            .unwrap()
            .to_string(),
        "ln(w)"
    );
    assert_eq!(
        improper_integral_to_surreal(&parse("0").unwrap(), "t", &zero)
            .unwrap()
            .to_string(),
        "0"
    );
    assert_eq!(
        improper_integral_to_surreal(&parse("1").unwrap(), "t", &zero)
            .unwrap()
            .to_string(),
        "w"
    );
    // two half-lines: the numerosity of the integers is 2w
    let half = improper_integral_to_surreal(&parse("1").unwrap(), "t", &zero).unwrap();
    let both = surreal_core::expr::add(&half, &half).unwrap();
    assert_eq!(both.to_string(), "2*w");
}

#[test]
fn improper_integral_respects_the_lower_endpoint() {
    let e = improper_integral_to_surreal(&parse("1/t").unwrap(), "t", &Rational::int(2)).unwrap();
    assert_eq!(e.to_string(), "ln(w) - ln(2)");
    assert!(matches!(
        improper_integral_to_surreal(&parse("1/t").unwrap(), "t", &Rational::zero()),
        Err(Error::Domain(_))
    ));
}
