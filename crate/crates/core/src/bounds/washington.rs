//! Simplest cubic fields `L_m = Q[x]/(f_m)` and the elliptic curves `y^2 = f_m(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::oracle::{field_key, format_key, ClassGroupStore};
use super::report::{BoundReport, ClassGroupTerm, Hypothesis, RhoInfty};
use super::{is_eisenstein, Evidence, GTrivialityCertificate};
use crate::arith::integer::{factor_u64, is_squarefree_integer};
use crate::arith::modp::PrimePoly;
use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::f2::span_dimension;
use crate::field::NumberField;

/// `x^3 + m x^2 - (m+3) x + 1`.
pub fn washington_poly(m: i64) -> RationalPoly {
    RationalPoly::from_i64s(&[1, -(m + 3), m, 1])
}

/// `D = m^2 + 3m + 9`; the discriminant of `f_m` is `D^2`.
pub fn washington_d(m: i64) -> Result<u64> {
    if m < 0 {
        return Err(Error::OutsideFamily(m));
    }
    (m as u64)
        .checked_mul(m as u64 + 3)
        .and_then(|v| v.checked_add(9))
        .ok_or_else(|| Error::InvalidArgument(format!("m = {m} is too large")))
}

/// Whether `m` belongs to the family: `m >= 0` and `D` squarefree.
pub fn in_family(m: i64) -> bool {
    washington_d(m).and_then(is_squarefree_integer).unwrap_or(false)
}

fn checked_d(m: i64) -> Result<u64> {
    let d = washington_d(m)?;
    if !is_squarefree_integer(d)? {
        return Err(Error::OutsideFamily(m));
    }
    Ok(d)
}

/// Local irreducibility of `f_m` at every bad prime: at 2 the reduction is one of the two
/// irreducible cubics, at `v | D` a shifted and scaled `f_m` is Eisenstein.
pub fn washington_local_certificate(m: i64) -> Result<GTrivialityCertificate> {
    let d = checked_d(m)?;
    let f = washington_poly(m);
    let mut entries = Vec::new();

    let reduced = PrimePoly::from_rational(2, &f).expect("integral");
    let ok2 = (reduced.coeffs() == [1, 0, 1, 1] || reduced.coeffs() == [1, 1, 0, 1]) && reduced.is_irreducible();
    entries.push((2, Evidence::IrreducibleModP, ok2));

    // 27 f_m(x - m/3) = 27x^3 - 9Dx + D(2m+3), and 4D - (2m+3)^2 = 27 makes D, 2m+3 coprime
    let big_d = BigInt::from(d);
    let t = BigInt::from(2 * m + 3);
    let identity = BigInt::from(4) * &big_d - &t * &t == BigInt::from(27);
    let shifted = f
        .shift(&BigRational::new(BigInt::from(-m), BigInt::from(3)))
        .scale(&BigRational::from_integer(27.into()));
    let expected = RationalPoly::from_bigints(&[&big_d * &t, BigInt::from(-9) * &big_d, BigInt::from(0), BigInt::from(27)]);
    let shape = identity && shifted == expected;
    let coeffs = expected.to_integer_coeffs().expect("integral");
    for (v, _) in factor_u64(d) {
        entries.push((v, Evidence::EisensteinAfterShift, shape && v > 3 && is_eisenstein(&coeffs, v)));
    }
    Ok(GTrivialityCertificate::new(entries))
}

/// The three roots of `f_m` as units of `L_m`: `theta`, `1/(1 - theta)`, `1 - 1/theta`.
pub fn root_units(field: &NumberField) -> Result<[crate::field::FieldElement; 3]> {
    let t = field.theta();
    let one = field.one();
    let a1 = field.inv(&field.sub(&one, &t))?;
    let a2 = field.sub(&one, &field.inv(&t)?);
    Ok([t, a1, a2])
}

/// `rho_infty = 0` for `L_m`: the root units realise every sign pattern, so their
/// signatures span `F_2^3`.
pub fn washington_rho_certificate(m: i64) -> Result<[crate::signatures::SignatureVector; 3]> {
    checked_d(m)?;
    let field = NumberField::new_irreducible(washington_poly(m))?;
    let units = root_units(&field)?;
    let sigs = [
        field.signature(&units[0])?,
        field.signature(&units[1])?,
        field.signature(&units[2])?,
    ];
    let vecs: Vec<_> = sigs.iter().map(|s| s.to_f2()).collect();
    let span = span_dimension(&vecs)?;
    if span != 3 {
        return Err(Error::CertificateFailed(format!("m={m}: root unit signatures span {span}, not 3")));
    }
    Ok(sigs)
}

/// `rank E_m(Q) <= 1 + dim Cl(L_m)[2]`.
pub fn washington_bound(m: i64, store: &ClassGroupStore) -> Result<BoundReport> {
    let cert = washington_local_certificate(m)?;
    if !cert.conclusion {
        return Err(Error::CertificateFailed(format!("m={m}: local irreducibility {}", cert.summary())));
    }
    washington_rho_certificate(m)?;
    let key = field_key(&washington_poly(m))?;
    let record = store
        .get(&key)
        .ok_or_else(|| Error::ClassGroupUnknown(format_key(&key)))?;
    let cl2 = ClassGroupTerm {
        value: record.cl2_rank as u64,
        provenance: record.source.clone(),
    };
    Ok(BoundReport {
        curve: format!("wash:{m}"),
        genus: 1,
        rho_infty: RhoInfty::Zero,
        j_infty_bound: 1,
        upper_bound: 1 + cl2.value,
        cl2,
        g_kernel_dim: 0,
        lower_bound: None,
        hypotheses: vec![Hypothesis::GTrivial, Hypothesis::RhoInftyCertified],
        certificate: Some(cert),
        notes: vec!["E(Q)[2] trivial since f_m is irreducible".into()],
    })
}

/// The rational point `(0, 1)` lies on every curve of the family.
pub fn washington_base_point() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::oracle::ClassGroupRecord;

    #[test]
    fn family_membership() {
        assert!(in_family(1));
        assert!(!in_family(0));
        assert!(!in_family(3));
        assert!(in_family(143));
        assert_eq!(washington_d(143).unwrap(), 20887);
        assert!(matches!(washington_local_certificate(0), Err(Error::OutsideFamily(0))));
        assert!(matches!(washington_local_certificate(-2), Err(Error::OutsideFamily(-2))));
    }

    #[test]
    fn local_certificates() {
        let c = washington_local_certificate(1).unwrap();
        assert_eq!(c.bad_primes(), vec![2, 13]);
        assert!(c.conclusion);
        let c = washington_local_certificate(143).unwrap();
        assert_eq!(c.bad_primes(), vec![2, 20887]);
        assert!(c.conclusion);
    }

    #[test]
    fn rho_certificates() {
        let s = washington_rho_certificate(1).unwrap();
        let shown: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["(-,+,+)", "(+,+,-)", "(+,-,+)"]);
        washington_rho_certificate(11).unwrap();
        washington_rho_certificate(143).unwrap();
    }

    #[test]
    fn bound_needs_record() {
        let mut store = ClassGroupStore::new();
        let e = washington_bound(1, &store).unwrap_err();
        assert_eq!(e, Error::ClassGroupUnknown("1,-4,1,1".into()));
        store
            .insert(ClassGroupRecord {
                key: field_key(&washington_poly(1)).unwrap(),
                cl2_rank: 0,
                narrow_cl2_rank: None,
                source: "test".into(),
            })
            .unwrap();
        let r = washington_bound(1, &store).unwrap();
        assert_eq!(r.upper_bound, 1);
        assert_eq!(r.line(), "curve=wash:1 g=1 rho_inf=0 cl2=0 upper=1 hyps=g-trivial,rho-inf-certified");
    }
}
