//! Real root isolation by Sturm sequences with exact rational (dyadic) endpoints.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{rat, RationalPoly};
use crate::error::{Error, Result};

/// Isolating intervals for the real roots of a squarefree polynomial.
///
/// Interval `i` isolates the `i`-th smallest root. An interval is either a point
/// `[r, r]` at an exact rational root, or an open interval whose endpoints are not
/// roots and at which the polynomial takes opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootIntervals {
    poly: RationalPoly,
    intervals: Vec<(BigRational, BigRational)>,
}

/// Sign of `x` as -1, 0 or 1.
pub fn sign(x: &BigRational) -> i32 {
    match x.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// The Sturm chain `f, f', -rem(f, f'), ...`.
pub fn sturm_chain(f: &RationalPoly) -> Vec<RationalPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).unwrap();
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[RationalPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| sign(&p.eval(x))))
}

fn variations_at_infinity(chain: &[RationalPoly], positive: bool) -> usize {
    variations(chain.iter().map(|p| {
        let lc = sign(p.leading().unwrap());
        let d = p.degree().unwrap();
        if positive || d % 2 == 0 {
            lc
        } else {
            -lc
        }
    }))
}

/// Number of distinct real roots, from the Sturm chain at `-inf` and `+inf`.
pub fn count_real_roots(f: &RationalPoly) -> usize {
    let chain = sturm_chain(f);
    variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true)
}

/// Power of two strictly exceeding every root's absolute value (Cauchy bound).
fn cauchy_bound(f: &RationalPoly) -> BigRational {
    let lc = f.leading().unwrap().abs();
    let max = f
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(BigRational::zero);
    let bound = max + BigRational::one();
    let mut b = BigRational::one();
    while b <= bound {
        b = b * rat(2);
    }
    b
}

/// A dyadic point in `(a, b)` that is not a root of `f`, close to the midpoint.
fn split_point(f: &RationalPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let two = rat(2);
    let mid = (a + b) / &two;
    if !f.eval(&mid).is_zero() {
        return mid;
    }
    let mut step = (b - a) / rat(4);
    loop {
        for cand in [&mid + &step, &mid - &step] {
            if !f.eval(&cand).is_zero() {
                return cand;
            }
        }
        step = step / &two;
    }
}

/// Isolates all real roots of a squarefree polynomial.
pub fn isolate_real_roots(f: &RationalPoly) -> Result<RootIntervals> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(RootIntervals {
            poly: f.clone(),
            intervals: Vec::new(),
        });
    }
    if RationalPoly::gcd(f, &f.derivative()).degree() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    let chain = sturm_chain(f);
    let b = cauchy_bound(f);
    let a = -b.clone();
    let mut out = Vec::new();
    // stack of (lo, hi, V(lo), V(hi)); roots counted in (lo, hi]
    let mut stack = vec![(a.clone(), b.clone(), variations_at(&chain, &a), variations_at(&chain, &b))];
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        let n = vlo - vhi;
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = split_point(f, &lo, &hi);
        let vmid = variations_at(&chain, &mid);
        stack.push((mid.clone(), hi, vmid, vhi));
        stack.push((lo, mid, vlo, vmid));
    }
    out.sort();
    Ok(RootIntervals {
        poly: f.clone(),
        intervals: out,
    })
}

impl RootIntervals {
    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn interval(&self, i: usize) -> &(BigRational, BigRational) {
        &self.intervals[i]
    }

    /// Halves interval `i` once, keeping the half with the sign change.
    pub fn bisect(&mut self, i: usize) {
        let (lo, hi) = self.intervals[i].clone();
        if lo == hi {
            return;
        }
        let mid = (&lo + &hi) / rat(2);
        let fm = sign(&self.poly.eval(&mid));
        if fm == 0 {
            self.intervals[i] = (mid.clone(), mid);
            return;
        }
        let flo = sign(&self.poly.eval(&lo));
        self.intervals[i] = if flo == fm { (mid, hi) } else { (lo, mid) };
    }

    /// Refines interval `i` until its width is at most `width`.
    pub fn refine(&mut self, i: usize, width: &BigRational) {
        while &self.intervals[i].1 - &self.intervals[i].0 > *width {
            self.bisect(i);
        }
    }

    pub fn refine_all(&mut self, width: &BigRational) {
        for i in 0..self.intervals.len() {
            self.refine(i, width);
        }
    }

    /// Sign of `g` at root `i`, refining the interval as needed. Errors if `g`
    /// vanishes at the root.
    pub fn sign_at(&mut self, i: usize, g: &RationalPoly) -> Result<i32> {
        if g.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (lo, hi) = &self.intervals[i];
        if lo == hi {
            let s = sign(&g.eval(lo));
            return if s == 0 { Err(Error::ZeroElement) } else { Ok(s) };
        }
        if !RationalPoly::gcd(&self.poly, g).degree().is_some_and(|d| d == 0) {
            // g shares a root with f; decide whether it is this root
            let h = RationalPoly::gcd(&self.poly, g);
            let hl = sign(&h.eval(lo));
            let hh = sign(&h.eval(hi));
            if hl != hh || hl == 0 {
                return Err(Error::ZeroElement);
            }
        }
        loop {
            let (lo, hi) = self.intervals[i].clone();
            if let Some(s) = interval_sign(g, &lo, &hi) {
                return Ok(s);
            }
            self.bisect(i);
            let (lo, hi) = &self.intervals[i];
            if lo == hi {
                let s = sign(&g.eval(lo));
                return if s == 0 { Err(Error::ZeroElement) } else { Ok(s) };
            }
        }
    }

    /// Floating-point midpoints, for diagnostics.
    pub fn approximations(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.intervals
            .iter()
            .map(|(lo, hi)| ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// Sign of `g` on `[lo, hi]` if constant there, by interval Horner evaluation.
pub fn interval_sign(g: &RationalPoly, lo: &BigRational, hi: &BigRational) -> Option<i32> {
    let (a, b) = interval_eval(g, lo, hi);
    if a.is_positive() {
        Some(1)
    } else if b.is_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Enclosure of `g([lo, hi])`.
pub fn interval_eval(g: &RationalPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in g.coeffs().iter().rev() {
        let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// `floor(x * 2^bits)` for a rational `x`.
pub fn to_fixed(x: &BigRational, bits: u32) -> BigInt {
    let scaled = x * BigRational::from_integer(BigInt::one() << bits);
    scaled.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2() {
        let mut r = isolate_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        r.refine_all(&q(1, 1000));
        let approx = r.approximations();
        assert!((approx[0] + 2f64.sqrt()).abs() < 1e-3);
        assert!((approx[1] - 2f64.sqrt()).abs() < 1e-3);
        assert!(r.interval(0).0 >= rat(-2) && r.interval(0).1 <= rat(-1));
    }

    #[test]
    fn washington_143_ordering() {
        let f = p(&[1, -146, 143, 1]);
        let mut r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 3);
        r.refine_all(&q(1, 4));
        let (a, b, c) = (r.interval(0).clone(), r.interval(1).clone(), r.interval(2).clone());
        assert!(a.0 >= rat(-145) && a.1 <= rat(-144));
        assert!(b.0 >= rat(0) && b.1 <= rat(1));
        assert!(c.0 >= rat(1) && c.1 <= rat(2));
    }

    #[test]
    fn negated_q11_roots() {
        // (-1)^5 g(-x) for g = x^5+x^4-4x^3-3x^2+3x+1
        let f = p(&[1, 3, -3, -4, 1, 1]).negate_roots();
        let mut r = isolate_real_roots(&f).unwrap();
        r.refine_all(&q(1, 1 << 20));
        let expected = [-1.68251, -0.83083, 0.28463, 1.30972, 1.91899];
        for (a, e) in r.approximations().iter().zip(expected) {
            assert!((a - e).abs() < 1e-4, "{a} vs {e}");
        }
    }

    #[test]
    fn rational_root_collapses() {
        let f = p(&[0, -1, 0, 1]); // x^3 - x
        let mut r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 3);
        r.refine_all(&q(1, 1 << 30));
        let (lo, hi) = r.interval(1);
        assert!(*lo <= rat(0) && *hi >= rat(0));
        assert_eq!(r.sign_at(1, &p(&[0, 1])), Err(Error::ZeroElement));
        // a midpoint landing exactly on a root collapses the interval
        let mut s = isolate_real_roots(&p(&[-1, 0, 1])).unwrap();
        s.intervals[1] = (rat(0), rat(2));
        s.bisect(1);
        assert_eq!(s.interval(1), &(rat(1), rat(1)));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(
            isolate_real_roots(&p(&[1, -2, 1])).unwrap_err(),
            Error::NotSquarefree
        );
    }

    #[test]
    fn sign_at_roots() {
        let f = p(&[-2, 0, 1]);
        let mut r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.sign_at(0, &p(&[0, 1])).unwrap(), -1);
        assert_eq!(r.sign_at(1, &p(&[0, 1])).unwrap(), 1);
        // x - 1.414 is positive at sqrt(2)
        let g = RationalPoly::new(vec![q(-1414, 1000), rat(1)]);
        assert_eq!(r.sign_at(1, &g).unwrap(), 1);
        assert_eq!(r.sign_at(0, &f), Err(Error::ZeroElement));
    }

    #[test]
    fn sturm_count_matches() {
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&p(&[1, -3, 0, 1])), 3);
        assert_eq!(count_real_roots(&p(&[-1, 0, 0, 1])), 1);
    }
}
