//! Signatures of the canonical cyclotomic unit in `Q(zeta_q)^+` for Sophie Germain
//! pairs, the Galois action on embeddings, and the full-rank certificate for
//! the totally positive units.

use rayon::prelude::*;

use crate::arith::integer::{is_prime_u64, primes_up_to};
use crate::arith::min_poly_2cos;
use crate::arith::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::f2::{circulant_rank, MatF2, VecF2};

/// Above this degree the certificate uses the circulant gcd instead of dense elimination.
pub const DENSE_LIMIT: u64 = 1500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SophieGermainPair {
    pub p: u64,
    pub q: u64,
}

impl SophieGermainPair {
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 7 || !is_prime_u64(q) || !is_prime_u64((q - 1) / 2) {
            return Err(Error::NotSophieGermain(q));
        }
        Ok(SophieGermainPair { p: (q - 1) / 2, q })
    }

    pub fn from_p(p: u64) -> Result<Self> {
        Self::from_q(p.checked_mul(2).and_then(|x| x.checked_add(1)).ok_or(Error::NotSophieGermain(0))?)
    }

    /// Genus of `y^2 = f(x)` with `deg f = p`.
    pub fn genus(&self) -> u64 {
        (self.p - 1) / 2
    }

    /// Whether the unit is `-(zeta + zeta^{-1})` (p = 1 mod 4) rather than `zeta + zeta^{-1}`.
    pub fn unit_is_negated(&self) -> bool {
        self.p % 4 == 1
    }

    /// Minimal polynomial of the canonical unit `u`; its ascending roots order the embeddings.
    pub fn unit_min_poly(&self) -> RationalPoly {
        min_poly_2cos(self.q, self.unit_is_negated()).expect("valid pair")
    }
}

/// Signs of an element under the embeddings `tau_1, ..., tau_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignatureVector {
    pub signs: Vec<i8>,
}

impl SignatureVector {
    pub fn new(signs: Vec<i8>) -> Self {
        SignatureVector { signs }
    }

    pub fn to_f2(&self) -> VecF2 {
        VecF2::from_signs(&self.signs)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn is_totally_positive(&self) -> bool {
        self.signs.iter().all(|&s| s > 0)
    }

    pub fn mul(&self, other: &SignatureVector) -> SignatureVector {
        SignatureVector::new(self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect())
    }
}

impl std::fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if *s < 0 { '-' } else { '+' })?;
        }
        write!(f, ")")
    }
}

/// A permutation of `{1, ..., p}`, stored as `images[i-1] = phi(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingPermutation {
    pub images: Vec<usize>,
}

impl DoublingPermutation {
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn apply_pow(&self, i: usize, k: u64) -> usize {
        (0..k).fold(i, |acc, _| self.apply(acc))
    }

    /// Order of the permutation as the lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycle_lengths().len() == 1
    }

    pub fn is_bijection(&self) -> bool {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        self.images.iter().all(|&x| {
            (1..=n).contains(&x) && !std::mem::replace(&mut seen[x], true)
        })
    }
}

/// `(-1, ..., -1, +1, ..., +1)`: `(p-1)/2` minus signs when `p = 1 mod 4`, else `(p+1)/2`.
pub fn canonical_signature(pair: &SophieGermainPair) -> SignatureVector {
    let p = pair.p as usize;
    let minus = if p % 4 == 1 { (p - 1) / 2 } else { (p + 1) / 2 };
    SignatureVector::new((0..p).map(|i| if i < minus { -1 } else { 1 }).collect())
}

/// The permutation with `tau_i(sigma(u)) = r_phi(i)` for `sigma: zeta -> zeta^2`.
pub fn doubling_permutation(pair: &SophieGermainPair) -> DoublingPermutation {
    let (p, q) = (pair.p, pair.q);
    let fold = |x: u64| {
        let r = (2 * x) % q;
        r.min(q - r)
    };
    let images = (1..=p)
        .map(|i| {
            if p % 4 == 1 {
                fold(i) as usize
            } else {
                (p + 1 - fold(p + 1 - i)) as usize
            }
        })
        .collect();
    DoublingPermutation { images }
}

/// The `p x (p-1)` matrix whose column `j` is the image of the signature of `sigma^j(u)`.
pub fn build_m_infty(pair: &SophieGermainPair) -> MatF2 {
    let p = pair.p as usize;
    let f = canonical_signature(pair).to_f2();
    let phi = doubling_permutation(pair);
    let mut m = MatF2::zeros(p, p - 1);
    // idx[i-1] = phi^j(i)
    let mut idx: Vec<usize> = (1..=p).collect();
    for j in 0..p - 1 {
        for i in 0..p {
            if f.get(idx[i] - 1) {
                m.set(i, j, true);
            }
        }
        for x in idx.iter_mut() {
            *x = phi.apply(*x);
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoInftyCertificate {
    pub pair: SophieGermainPair,
    pub d_infty: u64,
    pub rho_infty_zero: bool,
}

impl RhoInftyCertificate {
    fn new(pair: SophieGermainPair, d_infty: u64) -> Self {
        RhoInftyCertificate {
            pair,
            d_infty,
            rho_infty_zero: d_infty == pair.p - 1,
        }
    }

    /// `q p d_infty certified` line.
    pub fn line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.pair.q, self.pair.p, self.d_infty, self.rho_infty_zero
        )
    }
}

/// Certificate from the rank of the dense matrix.
pub fn certify_rho_infty_dense(pair: &SophieGermainPair) -> RhoInftyCertificate {
    RhoInftyCertificate::new(*pair, build_m_infty(pair).rank() as u64)
}

/// Certificate from the circulant structure: when `phi` is a single `p`-cycle the rows
/// of the full `p x p` matrix, reindexed along the cycle, form a reversed circulant
/// whose rank is `p - deg gcd(c(x), x^p - 1)`. The omitted column is the sum of the
/// others when the signature has even weight, so dropping it does not change the rank.
pub fn certify_rho_infty_circulant(pair: &SophieGermainPair) -> Option<RhoInftyCertificate> {
    let p = pair.p as usize;
    let phi = doubling_permutation(pair);
    let f = canonical_signature(pair).to_f2();
    if !phi.is_single_cycle() || f.weight() % 2 == 1 {
        return None;
    }
    let mut c = Vec::with_capacity(p);
    let mut i = 1;
    for _ in 0..p {
        c.push(f.get(i - 1));
        i = phi.apply(i);
    }
    Some(RhoInftyCertificate::new(*pair, circulant_rank(&c) as u64))
}

pub fn certify_rho_infty(pair: &SophieGermainPair) -> RhoInftyCertificate {
    if pair.p > DENSE_LIMIT {
        if let Some(c) = certify_rho_infty_circulant(pair) {
            return c;
        }
    }
    certify_rho_infty_dense(pair)
}

/// All Sophie Germain pairs with `q <= q_max`, ascending.
pub fn sophie_germain_pairs(q_max: u64) -> Vec<SophieGermainPair> {
    if q_max < 7 {
        return Vec::new();
    }
    let primes = primes_up_to(q_max);
    let half = primes_up_to(q_max / 2);
    primes
        .iter()
        .filter(|&&q| q >= 7 && half.binary_search(&((q - 1) / 2)).is_ok())
        .map(|&q| SophieGermainPair { p: (q - 1) / 2, q })
        .collect()
}

/// Certifies every pair up to `q_max`; results are sorted by `q` regardless of threading.
pub fn scan_sophie_germain(q_max: u64, threads: Option<usize>) -> Vec<RhoInftyCertificate> {
    let mut pairs = sophie_germain_pairs(q_max);
    // largest first for load balance; order restored below
    pairs.reverse();
    let run = || -> Vec<RhoInftyCertificate> {
        pairs.par_iter().with_max_len(1).map(certify_rho_infty).collect()
    };
    let mut out = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    out.sort_by_key(|c| c.pair.q);
    out
}
