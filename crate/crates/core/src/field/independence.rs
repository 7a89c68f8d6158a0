//! Classes in `L^x / (L^x)^2`: delta-images of factors and the dimension of the
//! subgroup they generate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::square::{Obstruction, SquareOptions};
use super::{DegreeOnePrime, FieldElement, NumberField};
use crate::arith::integer::{legendre, primes_from};
use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::f2::MatF2;

/// Nonzero representatives of square classes in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClassSet {
    representatives: Vec<FieldElement>,
}

impl SquareClassSet {
    pub fn new(representatives: Vec<FieldElement>) -> Result<Self> {
        if representatives.iter().any(|r| r.is_zero()) {
            return Err(Error::ZeroElement);
        }
        Ok(SquareClassSet { representatives })
    }

    pub fn representatives(&self) -> &[FieldElement] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn truncated(&self, k: usize) -> SquareClassSet {
        SquareClassSet {
            representatives: self.representatives[..k.min(self.len())].to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndependenceOptions {
    /// Largest number of classes accepted.
    pub cap: usize,
    /// Degree-one primes offered as characters before any refinement.
    pub initial_ideals: usize,
    /// Rational primes whose Legendre symbol of the norm is offered as a character.
    pub norm_primes: usize,
    pub square: SquareOptions,
}

impl Default for IndependenceOptions {
    fn default() -> Self {
        IndependenceOptions {
            cap: 16,
            initial_ideals: 128,
            norm_primes: 24,
            square: SquareOptions::default(),
        }
    }
}

/// `(-1)^{deg g} g(theta)`, the class of the divisor cut out by `g` on `y = y0`.
pub fn delta_class_of_factor(g: &RationalPoly, y0: &BigRational, field: &NumberField) -> Result<FieldElement> {
    let h = field.poly() - &RationalPoly::constant(y0 * y0);
    if h.is_zero() || h.rem(g)?.degree().is_some() {
        return Err(Error::InvalidArgument(format!("{g} does not divide f - y0^2")));
    }
    let v = field.from_poly(g);
    if v.is_zero() {
        return Err(Error::ZeroElement);
    }
    let deg = g.degree().ok_or(Error::ZeroPolynomial)?;
    Ok(if deg % 2 == 1 { field.neg(&v) } else { v })
}

#[derive(Clone, Debug)]
enum Character {
    Sign(usize),
    Residue(DegreeOnePrime),
    NormLegendre(u64),
}

fn eval_character(field: &NumberField, ch: &Character, a: &FieldElement, sign_cache: &[i8]) -> Option<bool> {
    match ch {
        Character::Sign(i) => Some(sign_cache[*i] < 0),
        Character::Residue(id) => {
            let v = field.reduce_at(a, id)?;
            (v != 0).then(|| legendre(v, id.l) == -1)
        }
        Character::NormLegendre(l) => {
            let n = field.norm(a);
            let lb = BigInt::from(*l);
            let den = n.denom().mod_floor(&lb);
            let num = n.numer().mod_floor(&lb);
            if den.is_zero() || num.is_zero() {
                return None;
            }
            let v = (num * den).mod_floor(&lb).to_u64().unwrap();
            Some(legendre(v, *l) == -1)
        }
    }
}

/// Characters defined on every class, with their values (one row per class).
fn character_rows(
    field: &NumberField,
    reps: &[FieldElement],
    candidates: &[Character],
    signs: &[Vec<i8>],
) -> (Vec<Character>, Vec<Vec<bool>>) {
    let mut kept = Vec::new();
    let mut rows = vec![Vec::new(); reps.len()];
    for ch in candidates {
        let vals: Option<Vec<bool>> = reps
            .iter()
            .zip(signs)
            .map(|(a, s)| eval_character(field, ch, a, s))
            .collect();
        if let Some(vals) = vals {
            for (row, v) in rows.iter_mut().zip(vals) {
                row.push(v);
            }
            kept.push(ch.clone());
        }
    }
    (kept, rows)
}

/// A character separating the non-square `x` from the squares, defined on every class.
fn separating_character(
    field: &NumberField,
    reps: &[FieldElement],
    x: &FieldElement,
    obstruction: &Obstruction,
    used_ideals: usize,
) -> Option<Character> {
    let all_defined = |ch: &Character| {
        reps.iter().all(|a| {
            let s = if matches!(ch, Character::Sign(_)) {
                field.signature(a).map(|v| v.signs).unwrap_or_default()
            } else {
                Vec::new()
            };
            eval_character(field, ch, a, &s).is_some()
        })
    };
    if let Obstruction::Residue { l, r } = obstruction {
        let ch = Character::Residue(DegreeOnePrime { l: *l, r: *r });
        if all_defined(&ch) {
            return Some(ch);
        }
    }
    for id in field.degree_one_primes().iter().skip(used_ideals) {
        let ch = Character::Residue(*id);
        if eval_character(field, &ch, x, &[]) == Some(true) && all_defined(&ch) {
            return Some(ch);
        }
    }
    for l in primes_from(3).take(2000) {
        let ch = Character::NormLegendre(l);
        if eval_character(field, &ch, x, &[]) == Some(true) && all_defined(&ch) {
            return Some(ch);
        }
    }
    None
}

/// Dimension of the subgroup of `L^x / (L^x)^2` generated by the classes.
pub fn independence_rank_mod_squares(field: &NumberField, classes: &SquareClassSet) -> Result<usize> {
    independence_rank_with(field, classes, &IndependenceOptions::default())
}

/// Character matrix lower bound, confirmed by exact squareness of every vector in
/// its left kernel; a non-square kernel vector contributes a new separating character.
pub fn independence_rank_with(
    field: &NumberField,
    classes: &SquareClassSet,
    opts: &IndependenceOptions,
) -> Result<usize> {
    let reps = classes.representatives();
    let k = reps.len();
    if k > opts.cap {
        return Err(Error::CapExceeded { count: k, cap: opts.cap });
    }
    if k == 0 {
        return Ok(0);
    }
    let signs: Vec<Vec<i8>> = reps
        .iter()
        .map(|a| field.signature(a).map(|s| s.signs))
        .collect::<Result<_>>()?;
    let mut candidates: Vec<Character> = (0..field.real_roots().len()).map(Character::Sign).collect();
    let ideals = field.degree_one_primes();
    let used_ideals = opts.initial_ideals.min(ideals.len());
    candidates.extend(ideals[..used_ideals].iter().map(|id| Character::Residue(*id)));
    candidates.extend(primes_from(3).take(opts.norm_primes).map(Character::NormLegendre));

    for _ in 0..=k {
        let (_, rows) = character_rows(field, reps, &candidates, &signs);
        let width = rows[0].len();
        let mut m = MatF2::zeros(width, k);
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    m.set(j, i, true);
                }
            }
        }
        let kernel = m.kernel_basis();
        let mut refined = false;
        for v in &kernel {
            let x = field.product((0..k).filter(|&i| v.get(i)).map(|i| &reps[i]));
            match field.is_square_with(&x, &opts.square)? {
                super::SquareVerdict::Square(_) => {}
                super::SquareVerdict::NonSquare(ob) => {
                    let ch = separating_character(field, reps, &x, &ob, used_ideals).ok_or_else(|| {
                        Error::Undetermined("no character separates a non-square product".into())
                    })?;
                    candidates.push(ch);
                    refined = true;
                    break;
                }
            }
        }
        if !refined {
            return Ok(k - kernel.len());
        }
    }
    Err(Error::Undetermined("character refinement did not converge".into()))
}

/// Oracle: squareness of all `2^k - 1` nonempty products; the square products form a
/// subspace of dimension `d` and the rank is `k - d`.
pub fn independence_rank_brute_force(field: &NumberField, classes: &SquareClassSet, cap: usize) -> Result<usize> {
    let reps = classes.representatives();
    let k = reps.len();
    if k > cap {
        return Err(Error::CapExceeded { count: k, cap });
    }
    let results: Vec<Result<bool>> = (1u64..1 << k)
        .into_par_iter()
        .map(|mask| {
            let x = field.product((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| &reps[i]));
            field.is_square(&x).map(|v| v.is_square())
        })
        .collect();
    let mut squares = 1u64;
    for r in results {
        if r? {
            squares += 1;
        }
    }
    debug_assert!(squares.is_power_of_two());
    Ok(k - squares.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::rat;

    fn q11() -> NumberField {
        NumberField::new(RationalPoly::from_i64s(&[1, 3, -3, -4, 1, 1])).unwrap()
    }

    #[test]
    fn delta_classes_of_example() {
        let k = q11();
        let one = rat(1);
        let a = delta_class_of_factor(&RationalPoly::x(), &one, &k).unwrap();
        assert_eq!(a, k.neg(&k.theta()));
        let b = delta_class_of_factor(&RationalPoly::from_i64s(&[-3, 0, 1]), &one, &k).unwrap();
        assert_eq!(b, k.element_from_i64s(&[-3, 0, 1, 0, 0]).unwrap());
        let c = delta_class_of_factor(&RationalPoly::from_i64s(&[-1, 1, 1]), &one, &k).unwrap();
        assert_eq!(c, k.element_from_i64s(&[-1, 1, 1, 0, 0]).unwrap());
        assert!(delta_class_of_factor(&RationalPoly::from_i64s(&[1, 1]), &one, &k).is_err());

        let set = SquareClassSet::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(independence_rank_mod_squares(&k, &set).unwrap(), 2);
        assert_eq!(independence_rank_brute_force(&k, &set, 16).unwrap(), 2);
        assert!(k.is_square(&k.product([&a, &b, &c])).unwrap().is_square());
    }

    #[test]
    fn trivial_sets() {
        let k = q11();
        let one = SquareClassSet::new(vec![k.one()]).unwrap();
        assert_eq!(independence_rank_mod_squares(&k, &one).unwrap(), 0);
        let t = k.theta();
        let twice = SquareClassSet::new(vec![t.clone(), t]).unwrap();
        assert_eq!(independence_rank_mod_squares(&k, &twice).unwrap(), 1);
        assert!(SquareClassSet::new(vec![k.zero()]).is_err());
    }

    #[test]
    fn cap_enforced() {
        let k = q11();
        let set = SquareClassSet::new(vec![k.theta(); 17]).unwrap();
        assert_eq!(
            independence_rank_mod_squares(&k, &set),
            Err(Error::CapExceeded { count: 17, cap: 16 })
        );
    }

    #[test]
    fn rational_primes_are_independent() {
        // 2, 3, 5, 6 in a cubic field: rank 3
        let k = NumberField::new(RationalPoly::from_i64s(&[1, -2, -1, 1])).unwrap();
        let set = SquareClassSet::new(
            [2, 3, 5, 6].iter().map(|&c| k.from_rational(rat(c))).collect(),
        )
        .unwrap();
        assert_eq!(independence_rank_mod_squares(&k, &set).unwrap(), 3);
        assert_eq!(independence_rank_brute_force(&k, &set, 16).unwrap(), 3);
    }
}
