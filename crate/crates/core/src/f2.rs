//! Bit-packed linear algebra over F2, and F2[x] arithmetic for circulant ranks.

use crate::error::{Error, Result};

const W: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(W)
}

/// Packed vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VecF2 {
    len: usize,
    words: Vec<u64>,
}

impl VecF2 {
    pub fn zeros(len: usize) -> Self {
        VecF2 {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Image of a sign vector under the fixed isomorphism `-1 -> 1`, `+1 -> 0`.
    pub fn from_signs(signs: &[i8]) -> Self {
        Self::from_bits(&signs.iter().map(|&s| s < 0).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / W] >> (i % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % W);
        if b {
            self.words[i / W] |= mask;
        } else {
            self.words[i / W] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &VecF2) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Dense row-major packed matrix over F2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatF2 {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl MatF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        MatF2 {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[VecF2]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            m.row_words_mut(i).copy_from_slice(&r.words);
        }
        Ok(m)
    }

    pub fn from_columns(nrows: usize, columns: &[VecF2]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {nrows}",
                    c.len()
                )));
            }
            for i in 0..nrows {
                if c.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / W] >> (j % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / W];
        let mask = 1u64 << (j % W);
        if b {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> VecF2 {
        VecF2 {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> VecF2 {
        VecF2::from_bits(&(0..self.rows).map(|i| self.get(i, j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> MatF2 {
        let mut t = MatF2::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// `rows[dst] ^= rows[src]`.
    fn xor_rows(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for k in from_word..s {
            a[k] ^= b[k];
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            if pr != r {
                for k in 0..self.stride {
                    self.bits.swap(pr * self.stride + k, r * self.stride + k);
                }
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r, c / W);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank by forward elimination on a private copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if pr != r {
                for k in 0..m.stride {
                    m.bits.swap(pr * m.stride + k, r * m.stride + k);
                }
            }
            for i in r + 1..m.rows {
                if m.get(i, c) {
                    m.xor_rows(i, r, c / W);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right null space `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Vec<VecF2> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = VecF2::zeros(self.cols);
            v.set(free, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &VecF2) -> Result<VecF2> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = VecF2::zeros(self.rows);
        for i in 0..self.rows {
            let dot = self
                .row_words(i)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(i, dot % 2 == 1);
        }
        Ok(out)
    }
}

/// Dimension of the span of equal-length vectors.
pub fn span_dimension(vectors: &[VecF2]) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(MatF2::from_rows(vectors)?.rank())
}

/// Polynomial over F2, bit `i` holding the coefficient of `x^i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl F2Poly {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; words_for(bits.len())];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / W] |= 1 << (i % W);
            }
        }
        Self::normalized(words)
    }

    /// `x^n + 1`.
    pub fn x_pow_plus_one(n: usize) -> Self {
        let mut words = vec![0u64; words_for(n + 1)];
        words[0] ^= 1;
        words[n / W] ^= 1 << (n % W);
        Self::normalized(words)
    }

    fn normalized(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        F2Poly { words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * W + (W - 1 - top.leading_zeros() as usize))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / W).is_some_and(|w| w >> (i % W) & 1 == 1)
    }

    /// `self ^= other * x^shift`, without renormalizing.
    fn xor_shifted(&mut self, other: &F2Poly, shift: usize) {
        let ws = shift / W;
        let bs = shift % W;
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        if bs == 0 {
            for (k, &w) in other.words.iter().enumerate() {
                self.words[k + ws] ^= w;
            }
        } else {
            for (k, &w) in other.words.iter().enumerate() {
                self.words[k + ws] ^= w << bs;
                self.words[k + ws + 1] ^= w >> (W - bs);
            }
        }
    }

    pub fn rem(&self, d: &F2Poly) -> Result<F2Poly> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            r.xor_shifted(d, dr - dd);
            r = Self::normalized(r.words);
        }
        Ok(r)
    }

    pub fn mul(&self, o: &F2Poly) -> F2Poly {
        let mut acc = F2Poly { words: Vec::new() };
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.coeff(i) {
                    acc.xor_shifted(o, i);
                }
            }
        }
        Self::normalized(acc.words)
    }

    pub fn gcd(a: &F2Poly, b: &F2Poly) -> F2Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }
}

/// Rank of the `n x n` circulant matrix with first row `c`, namely
/// `n - deg gcd(c(x), x^n - 1)`. Reversing or cyclically shifting rows and
/// columns does not change it.
pub fn circulant_rank(c: &[bool]) -> usize {
    let n = c.len();
    if n == 0 {
        return 0;
    }
    let cp = F2Poly::from_bits(c);
    if cp.is_zero() {
        return 0;
    }
    let g = F2Poly::gcd(&F2Poly::x_pow_plus_one(n), &cp);
    n - g.degree().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(bits: &[u8]) -> VecF2 {
        VecF2::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    fn naive_rank(rows: &[Vec<bool>]) -> usize {
        let mut m: Vec<Vec<bool>> = rows.to_vec();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..ncols {
            if let Some(p) = (r..m.len()).find(|&i| m[i][c]) {
                m.swap(p, r);
                for i in 0..m.len() {
                    if i != r && m[i][c] {
                        for k in 0..ncols {
                            let x = m[r][k];
                            m[i][k] ^= x;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> (MatF2, Vec<Vec<bool>>) {
        let rows: Vec<Vec<bool>> = (0..r)
            .map(|_| (0..c).map(|_| rng.random_bool(0.5)).collect())
            .collect();
        let packed = MatF2::from_rows(&rows.iter().map(|r| VecF2::from_bits(r)).collect::<Vec<_>>())
            .unwrap_or_else(|_| MatF2::zeros(r, c));
        (if r == 0 { MatF2::zeros(0, c) } else { packed }, rows)
    }

    #[test]
    fn basic_ranks() {
        assert_eq!(MatF2::identity(3).rank(), 3);
        assert_eq!(MatF2::zeros(4, 5).rank(), 0);
        let m = MatF2::from_columns(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernels() {
        assert!(MatF2::identity(4).kernel_basis().is_empty());
        let m = MatF2::from_rows(&[v(&[1, 1])]).unwrap();
        assert_eq!(m.kernel_basis(), vec![v(&[1, 1])]);
        let m = MatF2::from_columns(
            5,
            &[v(&[1, 1, 0, 0, 0]), v(&[1, 0, 0, 0, 1]), v(&[0, 0, 1, 0, 1]), v(&[0, 0, 1, 1, 0])],
        )
        .unwrap();
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn spans() {
        assert_eq!(span_dimension(&[v(&[1, 0, 0]), v(&[0, 0, 1]), v(&[0, 1, 0])]).unwrap(), 3);
        assert_eq!(span_dimension(&[]).unwrap(), 0);
        assert_eq!(span_dimension(&[v(&[1, 1]), v(&[1, 1])]).unwrap(), 1);
        assert!(span_dimension(&[v(&[1, 1]), v(&[1])]).is_err());
    }

    #[test]
    fn packed_rank_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let r = rng.random_range(1..=8);
            let c = rng.random_range(1..=8);
            let (m, rows) = random_matrix(&mut rng, r, c);
            assert_eq!(m.rank(), naive_rank(&rows));
        }
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let r = rng.random_range(1..=150);
            let c = rng.random_range(1..=150);
            let (m, rows) = random_matrix(&mut rng, r, c);
            assert_eq!(m.rank(), naive_rank(&rows));
            assert_eq!(m.rank(), m.transpose().rank());
            let ker = m.kernel_basis();
            assert_eq!(ker.len(), c - m.rank());
            for k in &ker {
                assert!(m.mul_vec(k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn circulant_rank_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(1..=140);
            let c: Vec<bool> = (0..n).map(|_| rng.random_bool(0.3)).collect();
            let rows: Vec<VecF2> = (0..n)
                .map(|i| VecF2::from_bits(&(0..n).map(|j| c[(j + n - i) % n]).collect::<Vec<_>>()))
                .collect();
            let dense = MatF2::from_rows(&rows).unwrap().rank();
            assert_eq!(circulant_rank(&c), dense, "n = {n}");
        }
    }

    #[test]
    fn f2poly_arithmetic() {
        // (x+1)^2 = x^2 + 1
        let a = F2Poly::from_bits(&[true, true]);
        assert_eq!(a.mul(&a), F2Poly::x_pow_plus_one(2));
        // x^7 + 1 = (x+1)(x^3+x+1)(x^3+x^2+1)
        let f = F2Poly::from_bits(&[true, true, false, true]);
        let g = F2Poly::from_bits(&[true, false, true, true]);
        let prod = a.mul(&f).mul(&g);
        assert_eq!(prod, F2Poly::x_pow_plus_one(7));
        assert_eq!(F2Poly::gcd(&prod, &f.mul(&a)), f.mul(&a));
        assert!(F2Poly::x_pow_plus_one(200).rem(&F2Poly::from_bits(&[])).is_err());
        assert_eq!(F2Poly::x_pow_plus_one(130).degree(), Some(130));
    }
}
