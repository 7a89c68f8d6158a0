//! Minimal polynomials of `2cos(2*pi/q)` and their negatives.

use super::integer::is_prime_u64;
use super::poly::RationalPoly;
use crate::error::{Error, Result};

/// Minimal polynomial of `zeta_q + zeta_q^{-1}` (or of its negative when `negate`),
/// of degree `(q-1)/2`.
pub fn min_poly_2cos(q: u64, negate: bool) -> Result<RationalPoly> {
    if q < 5 || !is_prime_u64(q) {
        return Err(Error::NotPrime(format!("{q} (need a prime q >= 5)")));
    }
    let p = ((q - 1) / 2) as usize;
    let y = RationalPoly::x();
    let mut prev = RationalPoly::from_i64s(&[2]);
    let mut cur = y.clone();
    let mut sum = &RationalPoly::one() + &cur;
    for _ in 1..p {
        let next = &(&y * &cur) - &prev;
        sum = &sum + &next;
        prev = cur;
        cur = next;
    }
    Ok(if negate { sum.negate_roots() } else { sum })
}

/// The convention `theta = (-1)^((p-1)/2) (zeta + zeta^{-1})`, giving constant term 1.
pub fn sophie_polynomial(q: u64) -> Result<RationalPoly> {
    let p = (q.saturating_sub(1)) / 2;
    min_poly_2cos(q, p % 4 == 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{discriminant, rat};
    use crate::arith::integer::primes_up_to;
    use num_traits::Signed;

    #[test]
    fn explicit_polynomials() {
        assert_eq!(min_poly_2cos(7, true).unwrap().to_string(), "x^3 - x^2 - 2x + 1");
        assert_eq!(
            min_poly_2cos(11, false).unwrap().to_string(),
            "x^5 + x^4 - 4x^3 - 3x^2 + 3x + 1"
        );
        assert_eq!(
            min_poly_2cos(23, true).unwrap().to_string(),
            "x^11 - x^10 - 10x^9 + 9x^8 + 36x^7 - 28x^6 - 56x^5 + 35x^4 + 35x^3 - 15x^2 - 6x + 1"
        );
    }

    #[test]
    fn convention_matches_examples() {
        assert_eq!(sophie_polynomial(7).unwrap(), min_poly_2cos(7, true).unwrap());
        assert_eq!(sophie_polynomial(11).unwrap(), min_poly_2cos(11, false).unwrap());
        assert_eq!(sophie_polynomial(23).unwrap(), min_poly_2cos(23, true).unwrap());
        for q in [7, 11, 23, 47, 59, 83] {
            assert_eq!(sophie_polynomial(q).unwrap().coeff(0), rat(1));
        }
    }

    #[test]
    fn rejects_bad_q() {
        assert!(min_poly_2cos(3, false).is_err());
        assert!(min_poly_2cos(9, false).is_err());
    }

    #[test]
    fn degree_monic_and_discriminant_is_power_of_q() {
        for q in primes_up_to(60).into_iter().filter(|&q| q >= 5) {
            for neg in [false, true] {
                let f = min_poly_2cos(q, neg).unwrap();
                assert_eq!(f.degree(), Some(((q - 1) / 2) as usize));
                assert!(f.is_monic() && f.is_integral());
                let mut d = discriminant(&f).unwrap().abs().to_integer();
                let qb = num_bigint::BigInt::from(q);
                while &d % &qb == num_bigint::BigInt::from(0) {
                    d /= &qb;
                }
                assert_eq!(d, num_bigint::BigInt::from(1), "q = {q}");
            }
        }
    }

    #[test]
    fn un_negated_constant_term_sign() {
        for q in [7u64, 11, 23, 13, 29] {
            let p = (q - 1) / 2;
            let c = min_poly_2cos(q, false).unwrap().coeff(0);
            let expected = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(c, rat(expected), "q = {q}");
        }
    }
}
