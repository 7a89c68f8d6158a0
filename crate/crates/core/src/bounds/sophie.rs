//! Curves `y^2 = f(x)` with `f` the minimal polynomial of a generator of `Q(zeta_q)^+`,
//! `q = 2p + 1` a Sophie Germain pair.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::oracle::{field_key, format_key, ClassGroupRecord, ClassGroupStore};
use super::report::{BoundReport, ClassGroupTerm, Hypothesis, RhoInfty};
use super::{is_eisenstein, Evidence, GTrivialityCertificate};
use crate::arith::cyclotomic::{min_poly_2cos, sophie_polynomial};
use crate::arith::integer::{is_prime_u64, multiplicative_order};
use crate::arith::modp::PrimePoly;
use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::signatures::{certify_rho_infty, SophieGermainPair};

/// Largest `q` for which the signature certificate is known to succeed.
pub const DEFAULT_SCAN_BOUND: u64 = 92459;

/// Whether 2 is inert in `Q(zeta_p)^+`: its image in `(Z/p)^x / {+-1}` has order `(p-1)/2`.
pub fn two_inert_in_real_cyclotomic(p: u64) -> Result<bool> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotPrime(format!("{p} (need an odd prime)")));
    }
    let ord = multiplicative_order(2, p)?;
    let quotient = if ord % 2 == 0 { ord / 2 } else { ord };
    Ok(quotient == (p - 1) / 2)
}

fn order_of_two_even(p: u64) -> bool {
    multiplicative_order(2, p).map(|o| o % 2 == 0).unwrap_or(false)
}

/// Local irreducibility at 2 (inert by the order of 2 mod q) and at q (totally ramified,
/// seen by an Eisenstein shift).
pub fn sophie_local_certificate(pair: &SophieGermainPair, f: &RationalPoly) -> Result<GTrivialityCertificate> {
    let q = pair.q;
    let ord = multiplicative_order(2, q)?;
    let inert = (ord == q - 1 || ord == (q - 1) / 2)
        && PrimePoly::from_rational(2, f).map(|g| g.is_irreducible()).unwrap_or(false);
    let ramified = [2i64, -2].iter().any(|&s| {
        f.shift(&BigRational::from_integer(BigInt::from(s)))
            .to_integer_coeffs()
            .is_some_and(|c| is_eisenstein(&c, q))
    });
    Ok(GTrivialityCertificate::new(vec![
        (2, Evidence::InertByOrder, inert),
        (q, Evidence::TotallyRamifiedCyclotomic, ramified),
    ]))
}

/// Looks up `Q(zeta_q)^+` under either sign of its generator.
pub fn lookup_cyclotomic_plus<'a>(q: u64, store: &'a ClassGroupStore) -> Result<(Option<&'a ClassGroupRecord>, String)> {
    let f = sophie_polynomial(q)?;
    let key = field_key(&f)?;
    let p = (q - 1) / 2;
    let other = field_key(&min_poly_2cos(q, p % 4 != 3)?)?;
    Ok((store.get(&key).or_else(|| store.get(&other)), format_key(&key)))
}

/// Upper bound for the 2-Selmer rank of the jacobian of `y^2 = f(x)`.
///
/// `rho_infty = 0` follows from any of: the Davis-Taussky conjecture (if assumed),
/// 2 inert in `Q(zeta_p)^+`, or the signature certificate when `q <= scan_bound`.
pub fn sophie_upper_bound(
    q: u64,
    store: &ClassGroupStore,
    assume_davis_taussky: bool,
    scan_bound: u64,
) -> Result<BoundReport> {
    let pair = SophieGermainPair::from_q(q)?;
    let p = pair.p;
    let g = pair.genus();
    let f = sophie_polynomial(q)?;
    let cert = sophie_local_certificate(&pair, &f)?;
    if !cert.conclusion {
        return Err(Error::CertificateFailed(format!("q={q}: local irreducibility {}", cert.summary())));
    }

    let mut hyps = vec![Hypothesis::GTrivial];
    let even = order_of_two_even(p);
    if even {
        hyps.push(Hypothesis::OrderOfTwoEven);
    }
    let inert = two_inert_in_real_cyclotomic(p)?;
    if inert {
        hyps.push(Hypothesis::TwoInert);
    }
    let scan = if q <= scan_bound {
        let c = certify_rho_infty(&pair);
        if c.rho_infty_zero {
            hyps.push(Hypothesis::QBelowScanBound);
        }
        Some(c.rho_infty_zero)
    } else {
        None
    };
    if assume_davis_taussky {
        hyps.push(Hypothesis::DavisTausskyAssumed);
    }
    let rho_zero = assume_davis_taussky || inert || scan == Some(true);

    let (record, key) = lookup_cyclotomic_plus(q, store)?;
    let mut notes = Vec::new();
    let (rho_infty, j_infty_bound, cl2) = if rho_zero {
        let term = match record {
            Some(r) => {
                if assume_davis_taussky && r.cl2_rank > 0 {
                    notes.push("class group data has even class number, contradicting Davis-Taussky".into());
                }
                ClassGroupTerm { value: r.cl2_rank as u64, provenance: r.source.clone() }
            }
            None if assume_davis_taussky => ClassGroupTerm {
                value: 0,
                provenance: "odd class number under Davis-Taussky".into(),
            },
            None => return Err(Error::ClassGroupUnknown(key)),
        };
        (RhoInfty::Zero, g, term)
    } else {
        let r = record.ok_or(Error::ClassGroupUnknown(key))?;
        let term = if let Some(n) = r.narrow_cl2_rank {
            ClassGroupTerm { value: n as u64, provenance: format!("{} (narrow)", r.source) }
        } else if even {
            ClassGroupTerm {
                value: r.cl2_rank as u64,
                provenance: format!("{} (narrow equals plain: order of 2 mod p even)", r.source),
            }
        } else {
            hyps.push(Hypothesis::NarrowDataMissing);
            ClassGroupTerm {
                value: r.cl2_rank as u64 + g,
                provenance: format!("{} plus g (narrow 2-rank at most cl2 + g)", r.source),
            }
        };
        let rho = if scan == Some(false) { RhoInfty::AtMostPMinusOne } else { RhoInfty::Unknown };
        (rho, p - 1, term)
    };
    hyps.sort();
    Ok(BoundReport {
        curve: format!("sophie:{q}"),
        genus: g,
        rho_infty,
        j_infty_bound,
        upper_bound: j_infty_bound + cl2.value,
        cl2,
        g_kernel_dim: 0,
        lower_bound: None,
        hypotheses: hyps,
        certificate: Some(cert),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::oracle::bundled_class_groups;

    #[test]
    fn inertness() {
        assert!(two_inert_in_real_cyclotomic(3).unwrap());
        assert!(two_inert_in_real_cyclotomic(5).unwrap());
        assert!(two_inert_in_real_cyclotomic(11).unwrap());
        // 2 has order 8 mod 17: quotient order 4 < 8
        assert!(!two_inert_in_real_cyclotomic(17).unwrap());
        assert!(two_inert_in_real_cyclotomic(2).is_err());
        assert!(two_inert_in_real_cyclotomic(9).is_err());
    }

    #[test]
    fn local_certificate() {
        for q in [7, 11, 23, 47, 59, 83, 107] {
            let pair = SophieGermainPair::from_q(q).unwrap();
            let c = sophie_local_certificate(&pair, &sophie_polynomial(q).unwrap()).unwrap();
            assert_eq!(c.bad_primes(), vec![2, q]);
            assert!(c.conclusion, "q={q}");
        }
    }

    #[test]
    fn bundled_bounds() {
        let store = bundled_class_groups();
        for (q, b) in [(7, 1), (11, 2), (23, 5), (47, 11), (59, 14), (83, 20), (107, 26)] {
            let r = sophie_upper_bound(q, &store, false, DEFAULT_SCAN_BOUND).unwrap();
            assert_eq!(r.upper_bound, b, "q={q}");
            assert_eq!(r.rho_infty, RhoInfty::Zero);
        }
        assert_eq!(sophie_upper_bound(13, &store, false, 0), Err(Error::NotSophieGermain(13)));
    }

    #[test]
    fn fallbacks() {
        let empty = ClassGroupStore::new();
        assert!(matches!(sophie_upper_bound(11, &empty, false, 100), Err(Error::ClassGroupUnknown(_))));
        let dt = sophie_upper_bound(11, &empty, true, 100).unwrap();
        assert_eq!(dt.upper_bound, 2);
        assert!(dt.is_conditional());

        // 2 is not inert in Q(zeta_41)^+ and with the scan disabled nothing fires;
        // the order of 2 mod 41 is 20, so the narrow term is cl2
        assert!(!two_inert_in_real_cyclotomic(41).unwrap());
        let store = bundled_class_groups();
        let r = sophie_upper_bound(83, &store, false, 0).unwrap();
        assert_eq!(r.rho_infty, RhoInfty::Unknown);
        assert_eq!(r.upper_bound, 40);
        assert!(!r.hypotheses.contains(&Hypothesis::NarrowDataMissing));

        // order of 2 mod 89 is 11: no narrow data and no parity argument
        let mut store = ClassGroupStore::new();
        store
            .insert(ClassGroupRecord {
                key: field_key(&sophie_polynomial(179).unwrap()).unwrap(),
                cl2_rank: 0,
                narrow_cl2_rank: None,
                source: "test".into(),
            })
            .unwrap();
        let r = sophie_upper_bound(179, &store, false, 0).unwrap();
        assert_eq!(r.upper_bound, 88 + 44);
        assert!(r.hypotheses.contains(&Hypothesis::NarrowDataMissing));
        let scanned = sophie_upper_bound(179, &store, false, DEFAULT_SCAN_BOUND).unwrap();
        assert_eq!(scanned.upper_bound, 44);
    }
}
