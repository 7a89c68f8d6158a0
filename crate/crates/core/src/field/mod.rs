//! Arithmetic in `L = Q[T]/(f(T))` for monic irreducible integral `f`.

pub mod independence;
mod square;

pub use independence::{
    delta_class_of_factor, independence_rank_brute_force, independence_rank_mod_squares,
    IndependenceOptions, SquareClassSet,
};
pub use square::{Obstruction, SquareOptions, SquareRoute, SquareVerdict};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::factor::factor_over_q;
use crate::arith::integer::primes_from;
use crate::arith::modp::PrimePoly;
use crate::arith::poly::{discriminant, resultant, RationalPoly};
use crate::arith::roots::{isolate_real_roots, RootIntervals};
use crate::error::{Error, Result};
use crate::signatures::SignatureVector;

/// Element of `L` in power-basis coordinates `c_0 + c_1 theta + ... + c_{n-1} theta^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coords.clone())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Degree-one prime `(l, theta - r)` of `Z[theta]` with `l` not dividing `disc(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeOnePrime {
    pub l: u64,
    pub r: u64,
}

#[derive(Debug)]
pub struct NumberField {
    f: RationalPoly,
    n: usize,
    disc: BigInt,
    roots: RootIntervals,
    ideals: OnceLock<Vec<DegreeOnePrime>>,
    inert: OnceLock<Vec<u64>>,
}

impl Clone for NumberField {
    fn clone(&self) -> Self {
        NumberField {
            f: self.f.clone(),
            n: self.n,
            disc: self.disc.clone(),
            roots: self.roots.clone(),
            ideals: OnceLock::new(),
            inert: OnceLock::new(),
        }
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

/// Degree-one ideals kept for residue screens and characters.
const IDEAL_TABLE: usize = 1280;
const INERT_TABLE: usize = 6;
const PRIME_SEARCH_LIMIT: u64 = 200_000;

impl NumberField {
    /// Builds the field, checking that `f` is monic, integral, of degree at least 2
    /// and irreducible over Q.
    pub fn new(f: RationalPoly) -> Result<Self> {
        let fac = factor_over_q(&f)?;
        if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
            return Err(Error::Reducible);
        }
        Self::new_irreducible(f)
    }

    /// Same as [`NumberField::new`] but trusts the caller on irreducibility.
    pub fn new_irreducible(f: RationalPoly) -> Result<Self> {
        let n = f.degree().ok_or(Error::ZeroPolynomial)?;
        if n < 2 {
            return Err(Error::InvalidArgument("field degree must be at least 2".into()));
        }
        if !f.is_monic() || !f.is_integral() {
            return Err(Error::InvalidArgument(
                "defining polynomial must be monic with integer coefficients".into(),
            ));
        }
        let disc = discriminant(&f)?.to_integer();
        let mut roots = isolate_real_roots(&f)?;
        roots.refine_all(&BigRational::new(BigInt::one(), BigInt::one() << 32));
        Ok(NumberField {
            f,
            n,
            disc,
            roots,
            ideals: OnceLock::new(),
            inert: OnceLock::new(),
        })
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn real_roots(&self) -> &RootIntervals {
        &self.roots
    }

    pub fn is_totally_real(&self) -> bool {
        self.roots.len() == self.n
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree {} field",
                coords.len(),
                self.n
            )));
        }
        Ok(FieldElement { coords })
    }

    pub fn element_from_i64s(&self, coords: &[i64]) -> Result<FieldElement> {
        self.element(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `g(theta)`.
    pub fn from_poly(&self, g: &RationalPoly) -> FieldElement {
        let mut c: Vec<BigRational> = g.coeffs().to_vec();
        self.reduce_in_place(&mut c);
        c.resize(self.n, BigRational::zero());
        FieldElement { coords: c }
    }

    pub fn from_rational(&self, c: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.n];
        coords[0] = c;
        FieldElement { coords }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_rational(BigRational::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn theta(&self) -> FieldElement {
        self.from_poly(&RationalPoly::x())
    }

    fn reduce_in_place(&self, c: &mut Vec<BigRational>) {
        let fc = self.f.coeffs();
        let n = self.n;
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - n;
            for (j, fj) in fc.iter().enumerate().take(n) {
                if !fj.is_zero() {
                    c[base + j] -= &top * fj;
                }
            }
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: &FieldElement, c: &BigRational) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut c = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        self.reduce_in_place(&mut c);
        FieldElement { coords: c }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = RationalPoly::ext_gcd(&a.to_poly(), &self.f);
        debug_assert_eq!(g.degree(), Some(0));
        let s = s.scale(&(BigRational::one() / g.coeff(0)));
        Ok(self.from_poly(&s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn arithmetic(&self, a: &FieldElement, b: &FieldElement, op: ElementOp) -> Result<FieldElement> {
        Ok(match op {
            ElementOp::Add => self.add(a, b),
            ElementOp::Sub => self.sub(a, b),
            ElementOp::Mul => self.mul(a, b),
            ElementOp::Div => self.div(a, b)?,
        })
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// `N(a) = Res(f, a)` for monic `f`.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        if a.is_zero() {
            return BigRational::zero();
        }
        let ap = a.to_poly();
        if ap.degree() == Some(0) {
            return num_traits::pow(ap.coeff(0), self.n);
        }
        resultant(&self.f, &ap)
    }

    /// Trace as the sum of the diagonal of multiplication by `a`.
    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let mut basis = self.one();
        let theta = self.theta();
        let mut t = BigRational::zero();
        for i in 0..self.n {
            t += &self.mul(a, &basis).coords[i];
            basis = self.mul(&basis, &theta);
        }
        t
    }

    /// Signs of `a` at the real roots of `f`, in ascending order of the roots.
    pub fn signature(&self, a: &FieldElement) -> Result<SignatureVector> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let g = a.to_poly();
        let mut roots = self.roots.clone();
        let signs = (0..roots.len())
            .map(|i| roots.sign_at(i, &g).map(|s| s as i8))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignatureVector::new(signs))
    }

    /// Degree-one primes `(l, theta - r)` with `l` odd and coprime to `disc(f)`,
    /// in increasing order of `l`, then `r`.
    pub fn degree_one_primes(&self) -> &[DegreeOnePrime] {
        self.ideals.get_or_init(|| {
            let mut out = Vec::new();
            for l in primes_from(3) {
                if out.len() >= IDEAL_TABLE || l > PRIME_SEARCH_LIMIT {
                    break;
                }
                if (&self.disc % BigInt::from(l)).is_zero() {
                    continue;
                }
                let fl = PrimePoly::from_rational(l, &self.f).expect("integral");
                for r in fl.roots() {
                    out.push(DegreeOnePrime { l, r });
                }
            }
            out
        })
    }

    /// Odd primes coprime to `disc(f)` modulo which `f` stays irreducible.
    pub fn inert_primes(&self) -> &[u64] {
        self.inert.get_or_init(|| {
            let mut out = Vec::new();
            for l in primes_from(3).take_while(|&l| l < 20_000) {
                if out.len() >= INERT_TABLE {
                    break;
                }
                if (&self.disc % BigInt::from(l)).is_zero() {
                    continue;
                }
                if PrimePoly::from_rational(l, &self.f).expect("integral").is_irreducible() {
                    out.push(l);
                }
            }
            out
        })
    }

    /// `a(r) mod l`, or `None` when `l` divides a coordinate denominator.
    pub fn reduce_at(&self, a: &FieldElement, ideal: &DegreeOnePrime) -> Option<u64> {
        let l = ideal.l;
        let lb = BigInt::from(l);
        let mut acc = 0u64;
        for c in a.coords.iter().rev() {
            let den = c.denom().mod_floor(&lb);
            if den.is_zero() {
                return None;
            }
            let den = num_traits::ToPrimitive::to_u64(&den).unwrap();
            let num = num_traits::ToPrimitive::to_u64(&c.numer().mod_floor(&lb)).unwrap();
            let v = crate::arith::integer::mul_mod(num, crate::arith::integer::inv_mod(den, l)?, l);
            acc = (crate::arith::integer::mul_mod(acc, ideal.r, l) + v) % l;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::rat;

    fn field(c: &[i64]) -> NumberField {
        NumberField::new(RationalPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn reduction_by_f() {
        let k = field(&[1, -2, -1, 1]);
        let t = k.theta();
        let t2 = k.mul(&t, &t);
        assert_eq!(k.mul(&t, &t2), k.element_from_i64s(&[-1, 2, 1]).unwrap());
    }

    #[test]
    fn example_product_is_minus_one() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        let a = k.from_poly(&RationalPoly::from_i64s(&[-3, 0, 1]));
        let b = k.from_poly(&RationalPoly::from_i64s(&[-1, 1, 1]));
        let prod = k.product([&a, &b, &k.theta()]);
        assert_eq!(prod, k.from_rational(rat(-1)));
    }

    #[test]
    fn inverse_and_division() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        let a = k.element_from_i64s(&[2, -1, 0, 3, 1]).unwrap();
        let ai = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ai), k.one());
        assert_eq!(k.div(&a, &k.zero()), Err(Error::DivisionByZero));
        assert_eq!(k.arithmetic(&a, &a, ElementOp::Div).unwrap(), k.one());
    }

    #[test]
    fn norms() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        assert_eq!(k.norm(&k.from_rational(rat(-1))), rat(-1));
        assert_eq!(k.norm(&k.one()), rat(1));
        let w = field(&[1, -146, 143, 1]);
        assert_eq!(w.norm(&w.theta()), rat(-1));
        let a = k.element_from_i64s(&[1, 2, 0, 0, 1]).unwrap();
        let b = k.element_from_i64s(&[0, -1, 3, 0, 0]).unwrap();
        assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        assert_eq!(k.trace(&k.one()), rat(5));
        assert_eq!(k.trace(&k.theta()), rat(-1));
    }

    #[test]
    fn signatures() {
        let w = field(&[1, -146, 143, 1]);
        assert_eq!(w.signature(&w.theta()).unwrap().signs, vec![-1, 1, 1]);
        let k = field(&[1, 3, -3, -4, 1, 1]);
        assert_eq!(k.signature(&k.one()).unwrap().signs, vec![1; 5]);
        // roots of f ascending: -1.92, -1.31, -0.28, 0.83, 1.68
        assert_eq!(
            k.signature(&k.neg(&k.theta())).unwrap().signs,
            vec![1, 1, 1, -1, -1]
        );
        assert_eq!(k.signature(&k.zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(NumberField::new(RationalPoly::from_i64s(&[-1, 0, 1])).unwrap_err(), Error::Reducible);
        assert!(NumberField::new(RationalPoly::from_i64s(&[1, 2])).is_err());
        assert!(NumberField::new(RationalPoly::new(vec![rat(1), rat(0), rat(2)])).is_err());
    }

    #[test]
    fn degree_one_prime_table() {
        let k = field(&[1, -2, -1, 1]);
        let ideals = k.degree_one_primes();
        assert!(ideals.len() >= 20);
        for id in ideals.iter().take(40) {
            let fl = PrimePoly::from_rational(id.l, k.poly()).unwrap();
            assert_eq!(fl.eval(id.r), 0);
            // cyclic cubic of conductor 7: split primes are +-1 mod 7
            assert!(id.l % 7 == 1 || id.l % 7 == 6);
        }
        assert!(!k.inert_primes().is_empty());
    }
}
