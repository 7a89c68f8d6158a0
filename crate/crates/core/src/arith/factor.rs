//! Irreducible factorization over Q: squarefree split, modular factorization at a
//! good prime, multifactor Hensel lifting, and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::integer::primes_from;
use super::modp::{count_factors, factor_order, PrimePoly};
use super::poly::RationalPoly;
use crate::error::{Error, Result};

/// Candidate primes inspected before settling on the one with fewest modular factors.
const PRIME_CANDIDATES: usize = 5;
/// Modular factor count above which further primes are tried.
const MAX_MODULAR_FACTORS: usize = 24;
const EXTRA_CANDIDATES: usize = 25;

/// `f = content * prod(factor^mult)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigRational,
    pub factors: Vec<(RationalPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> RationalPoly {
        let mut acc = RationalPoly::constant(self.content.clone());
        for (g, e) in &self.factors {
            acc = &acc * &g.pow(*e);
        }
        acc
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.degree().unwrap(), *e as usize))
            .collect()
    }
}

/// Yun's squarefree decomposition of a nonconstant polynomial over Q (monic parts).
pub fn squarefree_decomposition(f: &RationalPoly) -> Vec<(RationalPoly, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    let a0 = RationalPoly::gcd(&f, &fp);
    let mut b = f.exact_div(&a0).unwrap();
    let c = fp.exact_div(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = RationalPoly::gcd(&b, &d);
        b = b.exact_div(&a).unwrap();
        let c = d.exact_div(&a).unwrap();
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

pub fn is_squarefree(f: &RationalPoly) -> bool {
    f.degree().is_some_and(|d| {
        d == 0 || RationalPoly::gcd(f, &f.derivative()).degree() == Some(0)
    })
}

/// Exact factorization of a nonzero polynomial over Q.
pub fn factor_over_q(f: &RationalPoly) -> Result<Factorization> {
    let lc = f.leading().cloned().ok_or(Error::ZeroPolynomial)?;
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        let (_, prim) = part.primitive_part();
        for g in factor_squarefree_primitive(&prim) {
            factors.push((RationalPoly::from_bigints(&g).monic(), mult));
        }
    }
    factors.sort_by(|a, b| {
        let ka = (a.0.degree(), a.0.primitive_part().1);
        let kb = (b.0.degree(), b.0.primitive_part().1);
        ka.cmp(&kb)
    });
    Ok(Factorization { content: lc, factors })
}

// ---- integer polynomials modulo m -------------------------------------------

type ZPoly = Vec<BigInt>;

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsym(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect::<Vec<_>>(),
        m,
    )
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect::<Vec<_>>(),
        m,
    )
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zmod(&out, m)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem = zmod(a, m);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (zmod(&quot, m), zmod(&rem, m))
}

fn from_prime_poly(a: &PrimePoly) -> ZPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn scalar_mul(a: &[BigInt], c: &BigInt, m: &BigInt) -> ZPoly {
    zmod(&a.iter().map(|x| x * c).collect::<Vec<_>>(), m)
}

/// One quadratic Hensel step: from a factorization and Bezout pair mod `m`
/// to the same mod `m^2`. `h` is monic.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zsub(f, &zmul(g, h, &m2), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e, &m2), h, &m2);
    let g1 = zadd(&zadd(g, &zmul(t, &e, &m2), &m2), &zmul(&q, g, &m2), &m2);
    let h1 = zadd(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = zsub(
        &zadd(&zmul(s, &g1, &m2), &zmul(t, &h1, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = zdivrem_monic(&zmul(s, &b, &m2), &h1, &m2);
    let s1 = zsub(s, &d, &m2);
    let t1 = zsub(&zsub(t, &zmul(t, &b, &m2), &m2), &zmul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

/// Lifts `f = lc(f) * prod(factors) mod p` to monic factors modulo `p^k`.
/// `f` is given modulo `p^k`.
fn multifactor_lift(f: &[BigInt], factors: &[PrimePoly], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(p).pow(k);
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = lc.modinv(&pk).expect("lc coprime to p");
        return vec![scalar_mul(f, &inv, &pk)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_p = (lc.mod_floor(&BigInt::from(p))).to_u64().unwrap();
    let g0 = left
        .iter()
        .fold(PrimePoly::new(p, vec![lc_p]), |acc, u| acc.mul(u));
    let h0 = right.iter().fold(PrimePoly::one(p), |acc, u| acc.mul(u));
    let (one, s0, t0) = PrimePoly::ext_gcd(&g0, &h0);
    debug_assert!(one.is_one());
    let (mut g, mut h, mut s, mut t) = (
        from_prime_poly(&g0),
        from_prime_poly(&h0),
        from_prime_poly(&s0),
        from_prime_poly(&t0),
    );
    let mut m = BigInt::from(p);
    let mut e = 1u32;
    while e < k {
        let fm = zmod(f, &(&m * &m));
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
        m = &m * &m;
        e *= 2;
    }
    let g = zmod(&g, &pk);
    let h = zmod(&h, &pk);
    let mut out = multifactor_lift(&g, left, p, k);
    out.extend(multifactor_lift(&h, right, p, k));
    out
}

fn norm1(a: &[BigInt]) -> BigInt {
    a.iter().map(|c| c.abs()).sum()
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive(a: &[BigInt]) -> ZPoly {
    let mut c = content(a);
    if a.last().is_some_and(|x| x.is_negative()) {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

fn exact_div_z(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let pa = RationalPoly::from_bigints(a);
    let pb = RationalPoly::from_bigints(b);
    pa.exact_div(&pb)?.to_integer_coeffs()
}

/// Picks a prime not dividing `lc(g)` with `g mod p` squarefree, preferring few factors.
fn choose_prime(g: &[BigInt]) -> (u64, PrimePoly, usize) {
    let lc = g.last().unwrap();
    let mut best: Option<(u64, PrimePoly, usize)> = None;
    let mut seen = 0;
    for p in primes_from(3) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let gp = PrimePoly::from_bigints(p, g);
        if !PrimePoly::gcd(&gp, &gp.derivative()).is_one() {
            continue;
        }
        let count = count_factors(&gp.monic());
        if best.as_ref().is_none_or(|b| count < b.2) {
            best = Some((p, gp, count));
        }
        seen += 1;
        let settled = best.as_ref().unwrap().2 <= MAX_MODULAR_FACTORS;
        if count == 1 || (seen >= PRIME_CANDIDATES && settled) || seen >= PRIME_CANDIDATES + EXTRA_CANDIDATES {
            break;
        }
    }
    best.expect("infinitely many primes")
}

/// Factors a primitive squarefree integer polynomial with positive leading coefficient.
fn factor_squarefree_primitive(g: &[BigInt]) -> Vec<ZPoly> {
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g.to_vec()];
    }
    let (p, gp, count) = choose_prime(g);
    if count == 1 {
        return vec![g.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x2a55);
    let mut modular: Vec<PrimePoly> = Vec::new();
    for (prod, d) in gp.monic().distinct_degree() {
        modular.extend(prod.equal_degree(d, &mut rng));
    }
    modular.sort_by(factor_order);

    // Coefficient bound for factors of lc * g (von zur Gathen & Gerhard, 15.19).
    let lc = g[n].clone();
    let a_inf = g.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt =
        (BigInt::from(n + 1).sqrt() + 1u32) * (BigInt::one() << n) * &a_inf * &lc;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2u32 {
        pk *= &pb;
        k += 1;
    }
    let lifted = multifactor_lift(&zmod(g, &pk), &modular, p, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = g.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        let b = current.last().unwrap().clone();
        let const_target = &b * &current[0];
        for subset in combinations(remaining.len(), s) {
            let chosen: Vec<usize> = subset.iter().map(|&i| remaining[i]).collect();
            // cheap constant-term screen
            if !current[0].is_zero() {
                let c0 = chosen
                    .iter()
                    .fold(b.clone(), |acc, &i| (acc * lifted[i].first().cloned().unwrap_or_default()).mod_floor(&pk));
                let c0 = zsym(&[c0], &pk).pop().unwrap_or_default();
                if c0.is_zero() || !(&const_target % &c0).is_zero() {
                    continue;
                }
            }
            let gstar = zsym(
                &chosen
                    .iter()
                    .fold(vec![b.clone()], |acc, &i| zmul(&acc, &lifted[i], &pk)),
                &pk,
            );
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|i| !chosen.contains(i))
                .collect();
            let hstar = zsym(
                &rest
                    .iter()
                    .fold(vec![b.clone()], |acc, &i| zmul(&acc, &lifted[i], &pk)),
                &pk,
            );
            if norm1(&gstar) * norm1(&hstar) <= bound {
                let fac = primitive(&gstar);
                let Some(quot) = exact_div_z(&current, &fac) else {
                    continue;
                };
                found.push(fac);
                current = primitive(&quot);
                remaining = rest;
                continue 'outer;
            }
        }
        s += 1;
    }
    found.push(primitive(&current));
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::rat;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_i64s(c)
    }

    #[test]
    fn example_f_minus_one_q11() {
        let f = p(&[1, 3, -3, -4, 1, 1]);
        let g = &f - &RationalPoly::one();
        let fac = factor_over_q(&g).unwrap();
        assert_eq!(fac.content, rat(1));
        let got: Vec<RationalPoly> = fac.factors.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(got, vec![p(&[0, 1]), p(&[-3, 0, 1]), p(&[-1, 1, 1])]);
        assert_eq!(fac.expand(), g);
    }

    #[test]
    fn x2_minus_1() {
        let fac = factor_over_q(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn repeated_factors_and_content() {
        // 6 (x-1)^2 (x^2+1)^3 (2x+3)
        let base = &(&p(&[-1, 1]).pow(2) * &p(&[1, 0, 1]).pow(3)) * &p(&[3, 2]);
        let f = base.scale(&rat(6));
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.content, rat(12));
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.degrees(), vec![1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits into >= 2 factors mod every prime.
        let f = p(&[1, 0, -10, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
        // product of two such quartics; x^4 - 2x^2 + 9 is the minimal polynomial of sqrt(2) + i
        let g = p(&[9, 0, -2, 0, 1]);
        let fac = factor_over_q(&(&f * &g)).unwrap();
        assert_eq!(fac.factors.len(), 2);
    }

    #[test]
    fn combinations_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
    }
}
