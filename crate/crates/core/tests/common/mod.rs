use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;

use jacobian_bounds::arith::integer::{exact_sqrt, legendre};
use jacobian_bounds::arith::PrimePoly;
use jacobian_bounds::field::{FieldElement, NumberField, Obstruction, SquareVerdict};

pub fn is_rational_square(x: &BigRational) -> bool {
    !x.is_negative() && exact_sqrt(x.numer()).is_some() && exact_sqrt(x.denom()).is_some()
}

/// Checks a verdict independently: witnesses must square back, obstructions must hold.
pub fn verdict_is_sound(k: &NumberField, a: &FieldElement, v: &SquareVerdict) -> bool {
    match v {
        SquareVerdict::Square(w) => k.square(w) == *a,
        SquareVerdict::NonSquare(Obstruction::Norm) => !is_rational_square(&k.norm(a)),
        SquareVerdict::NonSquare(Obstruction::Sign { embedding }) => k.signature(a).unwrap().signs[*embedding] < 0,
        SquareVerdict::NonSquare(Obstruction::Residue { l, r }) => {
            let id = k.degree_one_primes().iter().find(|d| d.l == *l && d.r == *r).copied();
            id.and_then(|id| k.reduce_at(a, &id)).is_some_and(|x| legendre(x, *l) == -1)
        }
        SquareVerdict::NonSquare(Obstruction::InertResidue { l }) => {
            // Euler's criterion in F_{l^n}
            let f = PrimePoly::from_rational(*l, k.poly()).unwrap();
            let Some(ar) = PrimePoly::from_rational(*l, &a.to_poly()) else { return false };
            let e = (BigUint::from(*l).pow(k.degree() as u32) - 1u32) / 2u32;
            let r = ar.rem(&f).pow_mod_poly(&e, &f);
            r.degree() == Some(0) && r.coeffs()[0] == *l - 1
        }
    }
}

