//! Bernoulli numbers and polynomials (B_1 = -1/2 convention).
//!
//! These drive the discrete antidifference of powers, the reduction of
//! zeta(-n) to rationals, and the Stirling tail corrections in the
//! high-precision gamma-family numerics.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::One;

/// `B_0 .. B_n` inclusive, via the defining recurrence
/// `sum_{j<=m} C(m+1, j) B_j = [m = 0]`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::zero()); // odd Bernoulli numbers vanish past B_1
            continue;
        }
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += &(&binomial(m as u64 + 1, j as u64) * bj);
        }
        let div = Rational::int(m as i64 + 1);
        b.push(-(acc / div));
    }
    b
}

pub fn bernoulli_number(n: usize) -> Rational {
    bernoulli_numbers(n).pop().unwrap()
}

/// Coefficients of the Bernoulli polynomial `B_n(x)`, lowest power first:
/// `B_n(x) = sum_k C(n, k) B_{n-k} x^k`.
pub fn bernoulli_polynomial(n: usize) -> Vec<Rational> {
    let b = bernoulli_numbers(n);
    (0..=n)
        .map(|k| &binomial(n as u64, k as u64) * &b[n - k])
        .collect()
}

/// Integer binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::from_big(num, den)
}

/// Generalized binomial coefficient `C(r, k) = r(r-1)...(r-k+1)/k!` for
/// rational `r`; the head of the binomial series for `(1+u)^r`.
pub fn binomial_rational(r: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= &(r - &Rational::int(i as i64));
        acc *= &Rational::new(1, i as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[8], q(-1, 30));
        assert_eq!(b[10], q(5, 66));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomials_match_tables() {
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_polynomial(2), vec![q(1, 6), q(-1, 1), q(1, 1)]);
        // B_3(x) = x^3 - 3/2 x^2 + 1/2 x
        assert_eq!(
            bernoulli_polynomial(3),
            vec![q(0, 1), q(1, 2), q(-3, 2), q(1, 1)]
        );
        // B_5(x) = x^5 - 5/2 x^4 + 5/3 x^3 - 1/6 x
        assert_eq!(
            bernoulli_polynomial(5),
            vec![q(0, 1), q(-1, 6), q(0, 1), q(5, 3), q(-5, 2), q(1, 1)]
        );
    }

    #[test]
    fn difference_property() {
        // B_n(x+1) - B_n(x) = n x^(n-1), checked at sample points.
        for n in 1..=8usize {
            let coeffs = bernoulli_polynomial(n);
            let eval = |x: &Rational| -> Rational {
                let mut acc = Rational::zero();
                for (k, c) in coeffs.iter().enumerate() {
                    acc += &(c * &x.pow_i64(k as i64));
                }
                acc
            };
            for x in [q(0, 1), q(1, 1), q(3, 2), q(-2, 1), q(7, 3)] {
                let lhs = eval(&(&x + &Rational::one())) - eval(&x);
                let rhs = &Rational::int(n as i64) * &x.pow_i64(n as i64 - 1);
                assert_eq!(lhs, rhs, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn rational_binomials() {
        assert_eq!(binomial(5, 2), q(10, 1));
        assert_eq!(binomial(5, 6), q(0, 1));
        assert_eq!(binomial_rational(&q(1, 2), 0), q(1, 1));
        assert_eq!(binomial_rational(&q(1, 2), 1), q(1, 2));
        assert_eq!(binomial_rational(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial_rational(&q(1, 2), 3), q(1, 16));
    }
}
