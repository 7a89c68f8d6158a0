//! Polynomials over a prime field F_p with word-sized p, and their factorization.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::{inv_mod, is_prime_u64, mul_mod};
use super::poly::RationalPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimePoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PrimePoly {
    /// Reduces `coeffs` modulo `modulus`; primality is the caller's responsibility.
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % modulus).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimePoly { modulus, coeffs }
    }

    pub fn try_new(modulus: u64, coeffs: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(modulus) {
            return Err(Error::NotPrime(modulus.to_string()));
        }
        Ok(Self::new(modulus, coeffs))
    }

    pub fn from_i64s(modulus: u64, coeffs: &[i64]) -> Self {
        Self::new(
            modulus,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(modulus as i64) as u64)
                .collect(),
        )
    }

    pub fn from_bigints(modulus: u64, coeffs: &[BigInt]) -> Self {
        let m = BigInt::from(modulus);
        Self::new(
            modulus,
            coeffs
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().unwrap())
                .collect(),
        )
    }

    /// Reduction of a rational polynomial; `None` if `p` divides a denominator.
    pub fn from_rational(modulus: u64, f: &RationalPoly) -> Option<Self> {
        let m = BigInt::from(modulus);
        let mut coeffs = Vec::with_capacity(f.coeffs().len());
        for c in f.coeffs() {
            let d = c.denom().mod_floor(&m).to_u64().unwrap();
            let dinv = inv_mod(d, modulus)?;
            let n = c.numer().mod_floor(&m).to_u64().unwrap();
            coeffs.push(mul_mod(n, dinv, modulus));
        }
        Some(Self::new(modulus, coeffs))
    }

    pub fn zero(modulus: u64) -> Self {
        PrimePoly { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(modulus, vec![1])
    }

    pub fn x(modulus: u64) -> Self {
        Self::new(modulus, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.modulus).expect("prime modulus");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.modulus;
        Self::new(p, self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            p,
            (0..n)
                .map(|i| (self.c(i) + o.c(i)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(p, (0..n).map(|i| (self.c(i) + p - o.c(i)) % p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.modulus;
        if self.is_zero() || o.is_zero() {
            return Self::zero(p);
        }
        let mut out = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        let pp = p as u128;
        // Accumulate in u128 and reduce lazily; safe while products stay below 2^127.
        let lazy = p < (1 << 31);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                let t = a as u128 * b as u128;
                out[i + j] = if lazy { out[i + j] + t } else { (out[i + j] + t) % pp };
            }
        }
        Self::new(p, out.into_iter().map(|c| (c % pp) as u64).collect())
    }

    fn c(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.modulus;
        let dd = d.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p).expect("prime modulus");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = (rem[k + j] + p - mul_mod(c, dc, p)) % p;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*a + t*b = g` monic.
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let p = a.modulus;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn mul_mod_poly(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^exp mod m`.
    pub fn pow_mod_poly(&self, exp: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.modulus).rem(m);
        let base = self.rem(m);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod_poly(&acc, m);
            if exp.bit(i) {
                acc = acc.mul_mod_poly(&base, m);
            }
        }
        acc
    }

    /// Squarefree decomposition: pairwise coprime monic parts with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(PrimePoly, u32)> {
        let f = self.monic();
        let mut out = Vec::new();
        sqf_rec(&f, 1, &mut out);
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self) -> Vec<(PrimePoly, usize)> {
        let p = self.modulus;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(p);
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut d = 0;
        while let Some(deg) = f.degree() {
            if deg < 2 * (d + 1) {
                if deg > 0 {
                    out.push((f.clone(), deg));
                }
                break;
            }
            d += 1;
            h = h.pow_mod_poly(&pe, &f);
            let g = Self::gcd(&h.sub(&x), &f);
            if !g.is_one() {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a product of distinct monic irreducibles of degree `d` (Cantor-Zassenhaus).
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<PrimePoly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.monic()];
        }
        let p = self.modulus;
        let exp = if p == 2 {
            None
        } else {
            Some((BigUint::from(p).pow(d as u32) - 1u32) / 2u32)
        };
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.random_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = match &exp {
                Some(e) => a.pow_mod_poly(e, self).sub(&Self::one(p)),
                None => {
                    // Trace map a + a^2 + ... + a^(2^(d-1)) suffices in characteristic 2.
                    let mut t = a.rem(self);
                    let mut acc = t.clone();
                    for _ in 1..d {
                        t = t.mul_mod_poly(&t, self);
                        acc = acc.add(&t);
                    }
                    acc
                }
            };
            let g = Self::gcd(&b, self);
            if let Some(gd) = g.degree() {
                if gd > 0 && gd < n {
                    let h = self.div_rem(&g).0;
                    let mut out = g.equal_degree(d, rng);
                    out.extend(h.equal_degree(d, rng));
                    return out;
                }
            }
        }
    }

    /// Rabin-style irreducibility via distinct-degree factorization.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if !Self::gcd(self, &self.derivative()).is_one() {
            return false;
        }
        let dd = self.distinct_degree();
        dd.len() == 1 && dd[0].1 == n
    }

    /// Roots in F_p, ascending.
    pub fn roots(&self) -> Vec<u64> {
        let p = self.modulus;
        if self.is_zero() {
            return Vec::new();
        }
        let f = self.monic();
        let xp = Self::x(p).pow_mod_poly(&BigUint::from(p), &f);
        let g = Self::gcd(&xp.sub(&Self::x(p)), &f);
        if g.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut roots: Vec<u64> = g
            .equal_degree(1, &mut rng)
            .into_iter()
            .map(|l| (p - l.coeffs[0]) % p)
            .collect();
        roots.sort_unstable();
        roots
    }
}

fn sqf_rec(f: &PrimePoly, mult: u32, out: &mut Vec<(PrimePoly, u32)>) {
    let p = f.modulus;
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let fp = f.derivative();
    if fp.is_zero() {
        sqf_rec(&pth_root(f), mult * p as u32, out);
        return;
    }
    let mut c = PrimePoly::gcd(f, &fp);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = PrimePoly::gcd(&w, &c);
        let fac = w.div_rem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(), mult * i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        sqf_rec(&pth_root(&c), mult * p as u32, out);
    }
}

fn pth_root(f: &PrimePoly) -> PrimePoly {
    let p = f.modulus as usize;
    PrimePoly::new(
        f.modulus,
        f.coeffs.iter().step_by(p).copied().collect(),
    )
}

/// Total order used for reproducible factor lists: degree, then coefficients ascending.
pub(crate) fn factor_order(a: &PrimePoly, b: &PrimePoly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

/// Complete factorization over F_p into monic irreducibles with multiplicities.
pub fn factor_mod_p(f: &PrimePoly) -> Result<Vec<(PrimePoly, u32)>> {
    if !is_prime_u64(f.modulus) {
        return Err(Error::NotPrime(f.modulus.to_string()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7);
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        for (prod, d) in part.distinct_degree() {
            for irr in prod.equal_degree(d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| factor_order(&a.0, &b.0));
    Ok(out)
}

impl PrimePoly {
    /// Product of `factors` with multiplicities, times the constant `lc`.
    pub fn expand(modulus: u64, lc: u64, factors: &[(PrimePoly, u32)]) -> PrimePoly {
        let mut acc = PrimePoly::new(modulus, vec![lc]);
        for (g, e) in factors {
            for _ in 0..*e {
                acc = acc.mul(g);
            }
        }
        acc
    }
}

/// Number of nonzero-degree factors; convenience for prime selection.
pub(crate) fn count_factors(f: &PrimePoly) -> usize {
    f.distinct_degree()
        .iter()
        .map(|(g, d)| g.degree().unwrap() / d)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All monic irreducibles over F_2 of degree <= d, by sieving products.
    fn f2_irreducibles(max_deg: usize) -> Vec<PrimePoly> {
        let mut irr: Vec<PrimePoly> = Vec::new();
        for d in 1..=max_deg {
            for bits in 0u64..(1 << d) {
                let mut coeffs: Vec<u64> = (0..d).map(|i| (bits >> i) & 1).collect();
                coeffs.push(1);
                let f = PrimePoly::new(2, coeffs);
                if irr
                    .iter()
                    .filter(|g| g.degree().unwrap() <= d / 2)
                    .all(|g| !f.rem(g).is_zero())
                {
                    irr.push(f);
                }
            }
        }
        irr
    }

    #[test]
    fn washington_reductions_irreducible_mod_2() {
        for coeffs in [[1i64, 0, 1, 1], [1, 1, 0, 1]] {
            let f = PrimePoly::from_i64s(2, &coeffs);
            let fac = factor_mod_p(&f).unwrap();
            assert_eq!(fac, vec![(f.clone(), 1)]);
        }
    }

    #[test]
    fn x2_minus_1_mod_3() {
        let f = PrimePoly::from_i64s(3, &[-1, 0, 1]);
        let fac = factor_mod_p(&f).unwrap();
        assert_eq!(
            fac,
            vec![
                (PrimePoly::from_i64s(3, &[1, 1]), 1),
                (PrimePoly::from_i64s(3, &[2, 1]), 1)
            ]
        );
    }

    #[test]
    fn quintic_irreducible_mod_2_exhaustive_oracle() {
        let f = PrimePoly::from_i64s(2, &[1, 3, -3, -4, 1, 1]);
        assert_eq!(f.coeffs(), &[1, 1, 1, 0, 1, 1]);
        // irreducible iff no irreducible factor of degree <= 2
        let oracle = f2_irreducibles(2).iter().all(|g| !f.rem(g).is_zero());
        assert!(oracle);
        assert_eq!(factor_mod_p(&f).unwrap().len(), 1);
        assert!(f.is_irreducible());
    }

    #[test]
    fn composite_modulus_rejected() {
        let f = PrimePoly::new(6, vec![1, 1]);
        assert!(matches!(factor_mod_p(&f), Err(Error::NotPrime(_))));
        assert!(PrimePoly::try_new(9, vec![1]).is_err());
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // (x+1)^3 (x^2+x+1)^2 over F_3, exercising the p-th root branch
        let a = PrimePoly::from_i64s(3, &[1, 1]);
        let b = PrimePoly::from_i64s(3, &[2, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b).scale(2);
        let fac = factor_mod_p(&f).unwrap();
        assert_eq!(PrimePoly::expand(3, 2, &fac), f);
        for (g, _) in &fac {
            assert!(g.is_irreducible());
        }
    }

    #[test]
    fn factorization_round_trip_f2_all_degree_8() {
        for bits in 0u64..256 {
            let mut coeffs: Vec<u64> = (0..8).map(|i| (bits >> i) & 1).collect();
            coeffs.push(1);
            let f = PrimePoly::new(2, coeffs);
            let fac = factor_mod_p(&f).unwrap();
            assert_eq!(PrimePoly::expand(2, 1, &fac), f);
            assert!(fac.iter().all(|(g, _)| g.is_irreducible()));
        }
    }

    #[test]
    fn roots_mod_p() {
        // (x-2)(x-5)(x^2+1) over F_13
        let f = PrimePoly::from_i64s(13, &[-2, 1])
            .mul(&PrimePoly::from_i64s(13, &[-5, 1]))
            .mul(&PrimePoly::from_i64s(13, &[1, 0, 1]));
        assert_eq!(f.roots(), vec![2, 5, 8]);
    }
}
