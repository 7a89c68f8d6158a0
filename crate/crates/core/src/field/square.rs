//! Exact squareness: norm, sign and residue obstructions, then reconstruction of a
//! square root (l-adically at an inert prime, or from real embeddings) verified by
//! squaring.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldElement, NumberField};
use crate::arith::integer::{exact_sqrt, legendre};
use crate::arith::modp::PrimePoly;
use crate::arith::roots::RootIntervals;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareRoute {
    /// l-adic lifting when an inert prime exists, real embeddings otherwise.
    Auto,
    PAdic,
    RealEmbeddings,
}

#[derive(Clone, Debug)]
pub struct SquareOptions {
    /// Degree-one prime ideals in the initial residue screen.
    pub residue_ideals: usize,
    /// First rung of the precision ladder, in decimal digits.
    pub start_digits: u32,
    pub max_digits: u32,
    /// Largest denominator accepted when reconstructing a coordinate.
    pub height_cap: BigInt,
    pub route: SquareRoute,
}

impl Default for SquareOptions {
    fn default() -> Self {
        SquareOptions {
            residue_ideals: 20,
            start_digits: 64,
            max_digits: 4096,
            height_cap: BigInt::from(10u64).pow(12),
            route: SquareRoute::Auto,
        }
    }
}

/// Why an element is not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The norm is not the square of a rational number.
    Norm,
    /// Negative at the given real embedding (0-based, ascending roots).
    Sign { embedding: usize },
    /// Quadratic non-residue modulo the degree-one prime `(l, theta - r)`.
    Residue { l: u64, r: u64 },
    /// Non-residue in the residue field of an inert prime.
    InertResidue { l: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareVerdict {
    /// Carries `beta` with `beta^2 = a`, verified exactly.
    Square(FieldElement),
    NonSquare(Obstruction),
}

impl SquareVerdict {
    pub fn is_square(&self) -> bool {
        matches!(self, SquareVerdict::Square(_))
    }

    pub fn witness(&self) -> Option<&FieldElement> {
        match self {
            SquareVerdict::Square(b) => Some(b),
            SquareVerdict::NonSquare(_) => None,
        }
    }
}

fn is_rational_square(x: &BigRational) -> bool {
    !x.is_negative() && exact_sqrt(x.numer()).is_some() && exact_sqrt(x.denom()).is_some()
}

fn digits_to_bits(d: u32) -> u64 {
    (d as u64 * 3322).div_ceil(1000)
}

impl NumberField {
    pub fn is_square(&self, a: &FieldElement) -> Result<SquareVerdict> {
        self.is_square_with(a, &SquareOptions::default())
    }

    pub fn is_square_with(&self, a: &FieldElement, opts: &SquareOptions) -> Result<SquareVerdict> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !is_rational_square(&self.norm(a)) {
            return Ok(SquareVerdict::NonSquare(Obstruction::Norm));
        }
        let sig = self.signature(a)?;
        if let Some(i) = sig.signs.iter().position(|&s| s < 0) {
            return Ok(SquareVerdict::NonSquare(Obstruction::Sign { embedding: i }));
        }
        let mut screened = 0;
        let mut ideals = opts.residue_ideals;
        let mut digits = opts.start_digits.max(8);
        loop {
            if let Some(ob) = self.residue_screen(a, screened, ideals) {
                return Ok(SquareVerdict::NonSquare(ob));
            }
            screened = ideals;
            match self.reconstruct(a, digits, opts)? {
                Reconstruction::Root(b) => return Ok(SquareVerdict::Square(b)),
                Reconstruction::Obstructed(ob) => return Ok(SquareVerdict::NonSquare(ob)),
                Reconstruction::NotFound => {}
            }
            if digits >= opts.max_digits {
                return Err(Error::Undetermined(format!(
                    "{} digits, {} residue ideals",
                    digits, screened
                )));
            }
            digits = (digits * 2).min(opts.max_digits);
            ideals *= 2;
        }
    }

    /// Legendre symbols of `a` at the usable degree-one primes numbered `from..to`.
    fn residue_screen(&self, a: &FieldElement, from: usize, to: usize) -> Option<Obstruction> {
        let mut used = 0;
        for id in self.degree_one_primes() {
            if used >= to {
                break;
            }
            let Some(v) = self.reduce_at(a, id) else {
                continue;
            };
            if v == 0 {
                continue;
            }
            used += 1;
            if used > from && legendre(v, id.l) == -1 {
                return Some(Obstruction::Residue { l: id.l, r: id.r });
            }
        }
        None
    }

    fn reconstruct(&self, a: &FieldElement, digits: u32, opts: &SquareOptions) -> Result<Reconstruction> {
        let real_ok = self.is_totally_real() && self.degree() <= 16;
        match opts.route {
            SquareRoute::PAdic => self.padic_sqrt(a, digits, &opts.height_cap),
            SquareRoute::RealEmbeddings => {
                if !self.is_totally_real() {
                    return Err(Error::InvalidArgument(
                        "real-embedding reconstruction needs a totally real field".into(),
                    ));
                }
                Ok(self.real_sqrt(a, digits, &opts.height_cap))
            }
            SquareRoute::Auto => match self.padic_sqrt(a, digits, &opts.height_cap) {
                Err(Error::Undetermined(_)) if real_ok => Ok(self.real_sqrt(a, digits, &opts.height_cap)),
                other => other,
            },
        }
    }

    fn reduce_mod_prime(&self, a: &FieldElement, l: u64) -> Option<PrimePoly> {
        let lb = BigInt::from(l);
        let mut coeffs = Vec::with_capacity(self.degree());
        for c in a.coords() {
            let den = c.denom().mod_floor(&lb).to_u64().unwrap();
            let inv = crate::arith::integer::inv_mod(den, l)?;
            let num = c.numer().mod_floor(&lb).to_u64().unwrap();
            coeffs.push(crate::arith::integer::mul_mod(num, inv, l));
        }
        Some(PrimePoly::new(l, coeffs))
    }

    fn padic_sqrt(&self, a: &FieldElement, digits: u32, cap: &BigInt) -> Result<Reconstruction> {
        let den = a.denominator();
        let Some((l, abar)) = self.inert_primes().iter().find_map(|&l| {
            if (&den % BigInt::from(l)).is_zero() {
                return None;
            }
            let r = self.reduce_mod_prime(a, l)?;
            (!r.is_zero()).then_some((l, r))
        }) else {
            return Err(Error::Undetermined("no usable inert prime".into()));
        };
        let fl = PrimePoly::from_rational(l, self.poly()).expect("integral");
        let Some(b0) = sqrt_finite_field(&abar, &fl) else {
            return Ok(Reconstruction::Obstructed(Obstruction::InertResidue { l }));
        };
        let target = BigInt::from(10u32).pow(digits);
        let lb = BigInt::from(l);
        let fz: Vec<BigInt> = self.poly().to_integer_coeffs().unwrap();
        let ctx = ZModF { f: &fz };

        let two_b0 = b0.scale(2);
        let (g, y0, _) = PrimePoly::ext_gcd(&two_b0, &fl);
        debug_assert!(g.is_one());
        let mut beta: Vec<BigInt> = lift(&b0);
        let mut y: Vec<BigInt> = lift(&y0);
        let mut m = lb.clone();
        while m < target {
            m = &m * &m;
            let am = reduce_rational_coords(a.coords(), &m);
            let e = ctx.sub(&ctx.mul(&beta, &beta, &m), &am, &m);
            beta = ctx.sub(&beta, &ctx.mul(&e, &y, &m), &m);
            let two_beta_y = ctx.scale(&ctx.mul(&beta, &y, &m), &BigInt::from(2), &m);
            let corr = ctx.sub(&const_poly(BigInt::from(2), fz.len() - 1), &two_beta_y, &m);
            y = ctx.mul(&y, &corr, &m);
        }
        let mut coords = Vec::with_capacity(self.degree());
        for c in beta.iter().chain(std::iter::repeat(&BigInt::zero())).take(self.degree()) {
            match rational_reconstruct(c, &m, cap) {
                Some(r) => coords.push(r),
                None => return Ok(Reconstruction::NotFound),
            }
        }
        let b = FieldElement { coords };
        Ok(if self.square(&b) == *a {
            Reconstruction::Root(b)
        } else {
            Reconstruction::NotFound
        })
    }

    /// Square root from real embeddings: Lagrange interpolation of `+-sqrt(a(r_i))`
    /// over all sign patterns with the first sign fixed, in fixed point.
    fn real_sqrt(&self, a: &FieldElement, digits: u32, cap: &BigInt) -> Reconstruction {
        let n = self.degree();
        let bits = digits_to_bits(digits);
        let w = bits + 64 + 16 * n as u64;
        let mut roots: RootIntervals = self.real_roots().clone();
        let width = BigRational::new(BigInt::one(), BigInt::one() << (w + 8));
        roots.refine_all(&width);
        let xs: Vec<BigRational> = roots
            .intervals()
            .iter()
            .map(|(lo, hi)| (lo + hi) / BigRational::from_integer(2.into()))
            .collect();
        let scale = BigInt::one() << w;
        let to_fix = |x: &BigRational| -> BigInt { (x * BigRational::from_integer(scale.clone())).round().to_integer() };
        // s_i = sqrt(a(x_i)) in fixed point
        let ap = a.to_poly();
        let mut s = Vec::with_capacity(n);
        for x in &xs {
            let v = ap.eval(x);
            if !v.is_positive() {
                return Reconstruction::NotFound;
            }
            let scaled = (v * BigRational::from_integer(BigInt::one() << (2 * w))).floor().to_integer();
            s.push(num_integer::Roots::sqrt(&scaled));
        }
        // Lagrange basis coefficient vectors L_i, fixed point
        let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut num = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, xj) in xs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![BigRational::zero(); num.len() + 1];
                for (k, c) in num.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * xj;
                }
                num = next;
                denom *= &xs[i] - xj;
            }
            basis.push(num.iter().map(|c| to_fix(&(c / &denom))).collect());
        }
        // beta = sum eps_i s_i L_i, Gray-code walk over eps with eps_0 = +1
        let mut acc = vec![BigInt::zero(); n];
        let mut contrib: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let v: Vec<BigInt> = basis[i].iter().map(|c| (c * &s[i]) >> w).collect();
            for (k, c) in v.iter().enumerate() {
                acc[k] += c;
            }
            contrib.push(v);
        }
        let mut eps = vec![1i8; n];
        let tol = BigInt::one() << (w - bits / 2).max(1);
        let total: u64 = 1 << (n - 1);
        for step in 0..total {
            if step > 0 {
                let i = step.trailing_zeros() as usize + 1;
                eps[i] = -eps[i];
                for (k, c) in contrib[i].iter().enumerate() {
                    if eps[i] > 0 {
                        acc[k] += c * 2;
                    } else {
                        acc[k] -= c * 2;
                    }
                }
            }
            if let Some(b) = self.try_fixed_point(&acc, w, &tol, cap) {
                if self.square(&b) == *a {
                    return Reconstruction::Root(b);
                }
            }
        }
        Reconstruction::NotFound
    }

    fn try_fixed_point(&self, acc: &[BigInt], w: u64, tol: &BigInt, cap: &BigInt) -> Option<FieldElement> {
        let mut coords = Vec::with_capacity(acc.len());
        for x in acc {
            coords.push(best_rational(x, w, tol, cap)?);
        }
        Some(FieldElement { coords })
    }
}

enum Reconstruction {
    Root(FieldElement),
    Obstructed(Obstruction),
    NotFound,
}

fn lift(a: &PrimePoly) -> Vec<BigInt> {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn const_poly(c: BigInt, n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[0] = c;
    v
}

fn reduce_rational_coords(coords: &[BigRational], m: &BigInt) -> Vec<BigInt> {
    coords
        .iter()
        .map(|c| {
            let inv = c.denom().modinv(m).expect("denominator coprime to l");
            (c.numer() * inv).mod_floor(m)
        })
        .collect()
}

/// Arithmetic in `(Z/m)[x]/(f)` for monic integral `f`, coefficient vectors of length `deg f`.
struct ZModF<'a> {
    f: &'a [BigInt],
}

impl ZModF<'_> {
    fn n(&self) -> usize {
        self.f.len() - 1
    }

    fn pad(&self, a: &[BigInt]) -> Vec<BigInt> {
        let mut v = a.to_vec();
        v.resize(self.n(), BigInt::zero());
        v
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let (a, b) = (self.pad(a), self.pad(b));
        a.iter().zip(&b).map(|(x, y)| (x - y).mod_floor(m)).collect()
    }

    fn scale(&self, a: &[BigInt], c: &BigInt, m: &BigInt) -> Vec<BigInt> {
        self.pad(a).iter().map(|x| (x * c).mod_floor(m)).collect()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let n = self.n();
        let mut c = vec![BigInt::zero(); 2 * n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        for k in (n..2 * n).rev() {
            let top = std::mem::take(&mut c[k]).mod_floor(m);
            if top.is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.f[j].is_zero() {
                    c[k - n + j] -= &top * &self.f[j];
                }
            }
        }
        c.truncate(n);
        c.iter().map(|x| x.mod_floor(m)).collect()
    }
}

/// `r/s` with `r = s u (mod m)`, `0 < s <= cap`, `|r| s < m/2`, if one exists.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt, cap: &BigInt) -> Option<BigRational> {
    let half: BigInt = m >> 1;
    let rbound = &half / cap;
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > rbound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
    }
    if s1.is_zero() || s1.abs() > *cap {
        return None;
    }
    if !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Best rational approximation of `x / 2^w` with denominator at most `cap`, accepted
/// only when within `tol / 2^w`.
fn best_rational(x: &BigInt, w: u64, tol: &BigInt, cap: &BigInt) -> Option<BigRational> {
    let den = BigInt::one() << w;
    // continued fraction convergents of x/den
    let (mut a, mut b) = (x.clone(), den.clone());
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let t = a.div_floor(&b);
        let p2 = &t * &p1 + &p0;
        let q2 = &t * &q1 + &q0;
        if q2 > *cap {
            break;
        }
        (p0, p1) = (p1, p2);
        (q0, q1) = (q1, q2);
        let r = &a - &t * &b;
        if r.is_zero() {
            break;
        }
        (a, b) = (b, r);
    }
    if q1.is_zero() {
        return None;
    }
    // |x/den - p1/q1| <= tol/den  <=>  |x q1 - p1 den| <= tol q1
    let err = (x * &q1 - &p1 * &den).abs();
    (err <= tol * &q1).then(|| BigRational::new(p1, q1))
}

/// A square root of `a` in `F_l[x]/(f)` for irreducible `f`, or `None` for a non-residue.
pub fn sqrt_finite_field(a: &PrimePoly, f: &PrimePoly) -> Option<PrimePoly> {
    let l = f.modulus();
    let n = f.degree().unwrap() as u32;
    let a = a.rem(f);
    if a.is_zero() {
        return Some(a);
    }
    let q = BigUint::from(l).pow(n);
    let qm1 = &q - 1u32;
    let half = &qm1 >> 1;
    if !a.pow_mod_poly(&half, f).is_one() {
        return None;
    }
    let s = qm1.trailing_zeros().unwrap();
    let t = &qm1 >> s;
    if s == 1 {
        return Some(a.pow_mod_poly(&((&q + 1u32) >> 2), f));
    }
    // deterministic search for a non-residue: x + c, then 2x + c, ...
    let mut z = None;
    'search: for lead in 1..l {
        for c in 0..l {
            let cand = PrimePoly::new(l, vec![c, lead]).rem(f);
            if cand.is_zero() {
                continue;
            }
            if !cand.pow_mod_poly(&half, f).is_one() {
                z = Some(cand);
                break 'search;
            }
        }
    }
    let z = z?;
    let mut x = a.pow_mod_poly(&((&t + 1u32) >> 1), f);
    let mut b = a.pow_mod_poly(&t, f);
    let mut g = z.pow_mod_poly(&t, f);
    let mut r = s;
    while !b.is_one() {
        let mut m = 0;
        let mut bb = b.clone();
        while !bb.is_one() {
            bb = bb.mul_mod_poly(&bb, f);
            m += 1;
            if m == r {
                return None;
            }
        }
        let mut gs = g.clone();
        for _ in 0..(r - m - 1) {
            gs = gs.mul_mod_poly(&gs, f);
        }
        g = gs.mul_mod_poly(&gs, f);
        x = x.mul_mod_poly(&gs, f);
        b = b.mul_mod_poly(&g, f);
        r = m;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{rat, RationalPoly};

    fn field(c: &[i64]) -> NumberField {
        NumberField::new(RationalPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn theta_squared_is_square() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        let t2 = k.square(&k.theta());
        let v = k.is_square(&t2).unwrap();
        let b = v.witness().unwrap();
        assert!(*b == k.theta() || *b == k.neg(&k.theta()));
    }

    #[test]
    fn example_non_square() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        let a = k.mul(
            &k.neg(&k.theta()),
            &k.from_poly(&RationalPoly::from_i64s(&[-3, 0, 1])),
        );
        assert!(!k.is_square(&a).unwrap().is_square());
        assert!(k.is_square(&k.one()).unwrap().is_square());
        assert_eq!(k.is_square(&k.zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn rational_and_fractional_squares() {
        let k = field(&[1, -2, -1, 1]);
        let b = k.element(vec![rat(3) / rat(7), rat(-5), rat(2) / rat(9)]).unwrap();
        let a = k.square(&b);
        for route in [SquareRoute::PAdic, SquareRoute::RealEmbeddings] {
            let opts = SquareOptions { route, ..Default::default() };
            let v = k.is_square_with(&a, &opts).unwrap();
            let w = v.witness().unwrap();
            assert_eq!(k.square(w), a);
        }
        // 2 is not a square: norm 8
        assert_eq!(
            k.is_square(&k.from_rational(rat(2))).unwrap(),
            SquareVerdict::NonSquare(Obstruction::Norm)
        );
    }

    #[test]
    fn large_height_root_needs_ladder() {
        let k = field(&[1, 3, -3, -4, 1, 1]);
        let big: BigInt = BigInt::from(10u32).pow(40) + 7;
        let b = k
            .element(vec![
                BigRational::from_integer(big.clone()),
                rat(-3),
                BigRational::from_integer(-&big),
                rat(1),
                rat(11),
            ])
            .unwrap();
        let a = k.square(&b);
        let opts = SquareOptions { start_digits: 16, ..Default::default() };
        let v = k.is_square_with(&a, &opts).unwrap();
        assert_eq!(k.square(v.witness().unwrap()), a);
    }

    #[test]
    fn finite_field_sqrt() {
        // F_{3^5} via x^5 + x^4 + 2x^3 + x + 1 (irreducible mod 3 check first)
        let f = PrimePoly::from_i64s(3, &[1, 3, -3, -4, 1, 1]);
        assert!(f.is_irreducible());
        let b = PrimePoly::from_i64s(3, &[2, 1, 0, 1]);
        let a = b.mul_mod_poly(&b, &f);
        let r = sqrt_finite_field(&a, &f).unwrap();
        assert_eq!(r.mul_mod_poly(&r, &f), a);
        // Q - 1 divisible by 8: F_{17^2} with x^2 - 3
        let f = PrimePoly::from_i64s(17, &[-3, 0, 1]);
        assert!(f.is_irreducible());
        for c in 0..17 {
            let b = PrimePoly::from_i64s(17, &[c, 5]);
            let a = b.mul_mod_poly(&b, &f);
            let r = sqrt_finite_field(&a, &f).unwrap();
            assert_eq!(r.mul_mod_poly(&r, &f), a);
        }
    }

    #[test]
    fn reconstruction_helpers() {
        let m = BigInt::from(10u64).pow(30);
        let x = BigRational::new((-123).into(), 457.into());
        let u = (x.numer() * x.denom().modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(rational_reconstruct(&u, &m, &BigInt::from(10u64.pow(6))), Some(x));
        let w = 100;
        let val = (BigInt::from(-22) << w) / BigInt::from(7);
        let tol = BigInt::one() << 40;
        assert_eq!(
            best_rational(&val, w, &tol, &BigInt::from(1000)),
            Some(BigRational::new((-22).into(), 7.into()))
        );
    }
}
