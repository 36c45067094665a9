//! Special functions at arbitrary precision.
//!
//! Everything reduces to Stirling/Euler–Maclaurin expansions with exact
//! Bernoulli coefficients; arguments are first shifted right until the
//! asymptotic tail converges below the working precision.

use super::{big_from_rational, RM};
use crate::bernoulli::bernoulli_number;
use crate::error::{Error, Result};
use astro_float::{BigFloat, Consts};

/// Threshold above which the Stirling tail converges for precision `p` bits:
/// the minimal achievable error at argument z is ~ e^(-2 pi z).
fn shift_threshold(p: usize) -> u64 {
    let digits = p as f64 / std::f64::consts::LOG2_10;
    (0.45 * digits + 12.0).ceil() as u64
}

fn eps(p: usize) -> BigFloat {
    // 2^-(p-8): comfortably below the guard digits
    let mut e = BigFloat::from_u64(1, p);
    e.set_exponent(-(p as i64 - 8) as astro_float::Exponent);
    e
}

fn is_small(x: &BigFloat, e: &BigFloat) -> bool {
    matches!(x.abs().cmp(e), Some(d) if d < 0)
}

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: &BigFloat, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Domain(
            "lnGamma requires a positive argument".into(),
        ));
    }
    let threshold = BigFloat::from_u64(shift_threshold(p), p);
    // Gamma(x) = Gamma(x+n) / (x (x+1) ... (x+n-1))
    let mut z = x.clone();
    let mut shift_product = BigFloat::from_u64(1, p);
    let one = BigFloat::from_u64(1, p);
    while matches!(z.cmp(&threshold), Some(d) if d < 0) {
        shift_product = shift_product.mul(&z, p, RM);
        z = z.add(&one, p, RM);
    }
    let stirling = ln_gamma_stirling(&z, p, cc);
    Ok(stirling.sub(&shift_product.ln(p, RM, cc), p, RM))
}

fn ln_gamma_stirling(z: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let half = BigFloat::from_u64(1, p).div(&BigFloat::from_u64(2, p), p, RM);
    let ln_z = z.ln(p, RM, cc);
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, p), p, RM);
    let mut acc = z.sub(&half, p, RM).mul(&ln_z, p, RM);
    acc = acc.sub(z, p, RM);
    acc = acc.add(&two_pi.ln(p, RM, cc).mul(&half, p, RM), p, RM);
    // + sum B_2k / (2k (2k-1) z^(2k-1))
    let e = eps(p);
    let z2 = z.mul(z, p, RM);
    let mut zpow = z.clone(); // z^(2k-1)
    for k in 1..400u64 {
        let b = big_from_rational(&bernoulli_number((2 * k) as usize), p, cc);
        let denom = BigFloat::from_u64(2 * k * (2 * k - 1), p).mul(&zpow, p, RM);
        let term = b.div(&denom, p, RM);
        acc = acc.add(&term, p, RM);
        if is_small(&term, &e) {
            break;
        }
        zpow = zpow.mul(&z2, p, RM);
    }
    acc
}

/// psi(x) (digamma) for x > 0.
pub fn digamma(x: &BigFloat, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Domain("psi requires a positive argument".into()));
    }
    let threshold = BigFloat::from_u64(shift_threshold(p), p);
    // psi(x) = psi(x+n) - sum 1/(x+i)
    let mut z = x.clone();
    let mut shift_sum = BigFloat::from_u64(0, p);
    let one = BigFloat::from_u64(1, p);
    while matches!(z.cmp(&threshold), Some(d) if d < 0) {
        shift_sum = shift_sum.add(&one.div(&z, p, RM), p, RM);
        z = z.add(&one, p, RM);
    }
    // psi(z) = ln z - 1/(2z) - sum B_2k / (2k z^2k)
    let ln_z = z.ln(p, RM, cc);
    let mut acc = ln_z.sub(
        &one.div(&z.mul(&BigFloat::from_u64(2, p), p, RM), p, RM),
        p,
        RM,
    );
    let e = eps(p);
    let z2 = z.mul(&z, p, RM);
    let mut zpow = z2.clone(); // z^2k
    for k in 1..400u64 {
        let b = big_from_rational(&bernoulli_number((2 * k) as usize), p, cc);
        let denom = BigFloat::from_u64(2 * k, p).mul(&zpow, p, RM);
        let term = b.div(&denom, p, RM);
        acc = acc.sub(&term, p, RM);
        if is_small(&term, &e) {
            break;
        }
        zpow = zpow.mul(&z2, p, RM);
    }
    Ok(acc.sub(&shift_sum, p, RM))
}

/// Euler's constant: gamma = -psi(1).
pub fn euler_gamma(p: usize, cc: &mut Consts) -> BigFloat {
    digamma(&BigFloat::from_u64(1, p), p, cc)
        .expect("psi(1) is regular")
        .neg()
}

/// zeta(s) for real s != 1, by Euler–Maclaurin summation.
pub fn zeta(s: &BigFloat, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    let one = BigFloat::from_u64(1, p);
    let s_minus_1 = s.sub(&one, p, RM);
    if is_small(&s_minus_1, &eps(p)) {
        return Err(Error::Domain("zeta has a pole at 1".into()));
    }
    let big_n = shift_threshold(p).max(24);
    let n_f = BigFloat::from_u64(big_n, p);
    let minus_s = s.neg();
    // sum_{n=1}^{N} n^-s
    let mut acc = BigFloat::from_u64(0, p);
    for n in 1..=big_n {
        acc = acc.add(
            &BigFloat::from_u64(n, p).pow(&minus_s, p, RM, cc),
            p,
            RM,
        );
    }
    // + N^(1-s)/(s-1) - N^-s/2
    let n_pow_ms = n_f.pow(&minus_s, p, RM, cc);
    acc = acc.add(
        &n_f.mul(&n_pow_ms, p, RM).div(&s_minus_1, p, RM),
        p,
        RM,
    );
    acc = acc.sub(&n_pow_ms.div(&BigFloat::from_u64(2, p), p, RM), p, RM);
    // + sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    let e = eps(p);
    let n2 = n_f.mul(&n_f, p, RM);
    let mut n_pow = n_pow_ms.mul(&n_f, p, RM); // N^(-s-2k+1), k = 1 gives N^(1-s)... start below
    let mut poch = one.clone(); // s(s+1)...(s+2k-2)
    let mut factorial = one.clone(); // (2k)!
    let mut rising = s.clone(); // next factor s+j
    let mut j = 0u64; // factors multiplied into poch so far
    for k in 1..400u64 {
        // extend (2k)! and the Pochhammer product to 2k-1 factors
        factorial = factorial.mul(&BigFloat::from_u64(2 * k - 1, p), p, RM);
        factorial = factorial.mul(&BigFloat::from_u64(2 * k, p), p, RM);
        while j < 2 * k - 1 {
            poch = poch.mul(&rising, p, RM);
            rising = rising.add(&one, p, RM);
            j += 1;
        }
        n_pow = n_pow.div(&n2, p, RM); // N^(-s-2k+1)
        let b = big_from_rational(&bernoulli_number((2 * k) as usize), p, cc);
        let term = b
            .div(&factorial, p, RM)
            .mul(&poch, p, RM)
            .mul(&n_pow, p, RM);
        acc = acc.add(&term, p, RM);
        if is_small(&term, &e) && k > 4 {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{bits, to_decimal_string};

    fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
        let mut cc = Consts::new().unwrap();
        f(&mut cc)
    }

    fn render(x: &BigFloat, digits: u32) -> String {
        to_decimal_string(x, digits)
    }

    #[test]
    fn ln_gamma_matches_direct_logarithm() {
        let p = bits(40);
        with_consts(|cc| {
            // 19! = 121645100408832000
            let direct = BigFloat::from_u64(121_645_100_408_832_000, p).ln(p, RM, cc);
            let stirling = ln_gamma(&BigFloat::from_u64(20, p), p, cc).unwrap();
            assert_eq!(render(&direct, 35), render(&stirling, 35));
        });
    }

    #[test]
    fn ln_gamma_half() {
        let p = bits(30);
        with_consts(|cc| {
            let half = BigFloat::from_u64(1, p).div(&BigFloat::from_u64(2, p), p, RM);
            let v = ln_gamma(&half, p, cc).unwrap();
            // ln sqrt(pi)
            assert_eq!(render(&v, 30), "0.572364942924700087071713675677");
        });
    }

    #[test]
    fn digamma_values() {
        let p = bits(30);
        with_consts(|cc| {
            // psi(10) = H_9 - gamma
            let v = digamma(&BigFloat::from_u64(10, p), p, cc).unwrap();
            assert_eq!(render(&v, 30), "2.25175258906672110764745616389");
            let g = euler_gamma(p, cc);
            assert_eq!(render(&g, 30), "0.577215664901532860606512090082");
        });
    }

    #[test]
    fn zeta_values() {
        let p = bits(30);
        with_consts(|cc| {
            let two = BigFloat::from_u64(2, p);
            assert_eq!(
                render(&zeta(&two, p, cc).unwrap(), 30),
                "1.64493406684822643647241516665"
            );
            // zeta(0) = -1/2, zeta(-1) = -1/12: the Euler–Maclaurin tail
            // continues below the critical strip
            let zero = BigFloat::from_u64(0, p);
            assert_eq!(render(&zeta(&zero, p, cc).unwrap(), 20), "-0.5");
            let minus_one = BigFloat::from_u64(1, p).neg();
            assert_eq!(
                render(&zeta(&minus_one, p, cc).unwrap(), 20),
                "-0.083333333333333333333"
            );
            let one = BigFloat::from_u64(1, p);
            assert!(zeta(&one, p, cc).is_err());
        });
    }

    #[test]
    fn domain_errors() {
        let p = bits(20);
        with_consts(|cc| {
            let zero = BigFloat::from_u64(0, p);
            assert!(ln_gamma(&zero, p, cc).is_err());
            assert!(digamma(&zero, p, cc).is_err());
            let neg = BigFloat::from_u64(3, p).neg();
            assert!(ln_gamma(&neg, p, cc).is_err());
        });
    }
}
