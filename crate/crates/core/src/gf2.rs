//! Dense bit-packed linear algebra over the two-element field.
//!
//! Matrices act on column vectors: a map `V -> W` is stored as a
//! `dim W x dim V` matrix. Rows are packed into `u64` words and all
//! elimination is plain Gaussian elimination with word-wide XOR.
//!
//! Exterior and symmetric powers use lexicographically ordered bases
//! (index subsets for wedges, index multisets for monomials). That order is
//! relied upon by every module that composes stalk bases.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("target quotient does not factor through the source quotient")]
    NoFactorization,
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A vector over GF(2), packed 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "[{s}]")
    }
}

/// Dense matrix over GF(2), row-major with each row padded to whole words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 entries given row by row.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_row_vectors(cols: usize, rows: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(i).copy_from_slice(v.words());
        }
        m
    }

    pub fn from_column_vectors(rows: usize, columns: &[Gf2Vector]) -> Self {
        Self::from_row_vectors(rows, columns).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        Gf2Vector::from_bits((0..self.rows).map(|i| self.get(i, j)))
    }

    /// `row[dst] ^= row[src]`
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            let row = self.row_words(i);
            for (wi, &w) in row.iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    t.set(wi * WORD + b, i, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = self.row_words(i);
            let mut acc = vec![0u64; out.stride];
            for (wi, &w) in row.iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * WORD + w.trailing_zeros() as usize;
                    for (a, b) in acc.iter_mut().zip(rhs.row_words(k)) {
                        *a ^= b;
                    }
                    w &= w - 1;
                }
            }
            out.row_words_mut(i).copy_from_slice(&acc);
        }
        out
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.cols, v.len());
        Gf2Vector::from_bits((0..self.rows).map(|i| {
            self.row_words(i)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1
                == 1
        }))
    }

    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
        out
    }

    /// Kronecker product; row `(i1, i2)` sits at `i1 * rhs.rows + i2`.
    pub fn kron(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                if !self.get(i1, j1) {
                    continue;
                }
                for i2 in 0..rhs.rows {
                    for j2 in 0..rhs.cols {
                        if rhs.get(i2, j2) {
                            out.set(i1 * rhs.rows + i2, j1 * rhs.cols + j2, true);
                        }
                    }
                }
            }
        }
        out
    }

    /// Places `blocks` side by side; all must share a row count.
    pub fn hstack(rows: usize, blocks: &[&Gf2Matrix]) -> Gf2Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Gf2Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.write_block(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn vstack(cols: usize, blocks: &[&Gf2Matrix]) -> Gf2Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Gf2Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.write_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    /// XORs `block` into the submatrix with top-left corner `(r0, c0)`.
    pub fn write_block(&mut self, r0: usize, c0: usize, block: &Gf2Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in block.row(i).ones() {
                self.toggle(r0 + i, c0 + j);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Gf2Matrix {
        Gf2Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Reduced row echelon form; returns the reduced matrix (zero rows
    /// dropped) and its pivot columns.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let r = pivots.len();
        m.data.truncate(r * m.stride);
        m.rows = r;
        (m, pivots)
    }

    /// In-place elimination. With `full` the result is reduced (zeros above
    /// pivots as well); returns the pivot columns, one per leading row.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (wi, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + wi] & bit != 0)
            else {
                continue;
            };
            self.swap_rows(r, p);
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i != r && self.data[i * self.stride + wi] & bit != 0 {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.cols > self.rows.saturating_mul(4) && self.rows > 0 {
            return self.transpose().rank();
        }
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Basis of `{v : self * v = 0}` in canonical echelon form.
    pub fn kernel_basis(&self) -> Gf2Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let vectors: Vec<Gf2Vector> = free
            .iter()
            .map(|&f| {
                let mut v = Gf2Vector::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Gf2Subspace::span(self.cols, &vectors)
    }

    /// Finds `x` with `x * self = rhs`, i.e. expresses each row of `rhs` as a
    /// combination of the rows of `self`. `None` if some row of `rhs` lies
    /// outside the row space.
    pub fn solve_left(&self, rhs: &Gf2Matrix) -> Option<Gf2Matrix> {
        assert_eq!(self.cols, rhs.cols);
        let n = self.rows;
        // [A | I] -> [E | P] with E = P A
        let mut aug = Gf2Matrix::hstack(n, &[self, &Gf2Matrix::identity(n)]);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| aug.get(i, c)) else {
                continue;
            };
            aug.swap_rows(r, p);
            for i in 0..n {
                if i != r && aug.get(i, c) {
                    aug.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut out = Gf2Matrix::zeros(rhs.rows, n);
        for i in 0..rhs.rows {
            let mut residual = Gf2Matrix::hstack(1, &[&rhs.submatrix(&[i], &(0..rhs.cols).collect::<Vec<_>>()), &Gf2Matrix::zeros(1, n)]);
            for (row, &p) in pivots.iter().enumerate() {
                if residual.get(0, p) {
                    for (a, b) in residual.data.iter_mut().zip(aug.row_words(row)) {
                        *a ^= b;
                    }
                }
            }
            // left part must vanish; right part accumulated P-combination
            if (0..self.cols).any(|c| residual.get(0, c)) {
                return None;
            }
            for k in 0..n {
                if residual.get(0, self.cols + k) {
                    out.set(i, k, true);
                }
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::Shape(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let id = Gf2Matrix::identity(self.rows);
        // X * A = I
        let x = self.solve_left(&id).ok_or(Gf2Error::Singular)?;
        Ok(x)
    }

    /// Determinant (square matrices only).
    pub fn det(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.rank() == self.rows
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Gf2Matrix) -> Gf2Subspace {
    m.kernel_basis()
}

/// A subspace of `GF(2)^n` held as the rows of its reduced echelon basis.
/// The echelon form is unique, so equal subspaces have equal bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf2Subspace {
    ambient_dim: usize,
    basis: Gf2Matrix,
    pivots: Vec<usize>,
}

impl Gf2Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Gf2Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_rows(&Gf2Matrix::identity(ambient_dim))
    }

    pub fn span(ambient_dim: usize, vectors: &[Gf2Vector]) -> Self {
        Self::from_rows(&Gf2Matrix::from_row_vectors(ambient_dim, vectors))
    }

    pub fn from_rows(rows: &Gf2Matrix) -> Self {
        let (basis, pivots) = rows.rref();
        Self {
            ambient_dim: rows.cols(),
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Gf2Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &Gf2Vector) -> Option<Gf2Vector> {
        let mut residual = v.clone();
        let mut coords = Gf2Vector::zeros(self.dim());
        for (k, &p) in self.pivots.iter().enumerate() {
            if residual.get(p) {
                residual.xor_assign(&self.basis.row(k));
                coords.set(k, true);
            }
        }
        residual.is_zero().then_some(coords)
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> bool {
        (0..self.dim()).all(|k| other.contains(&self.basis.row(k)))
    }

    /// Matrix of the quotient map `GF(2)^n -> GF(2)^n / self`, using the
    /// non-pivot coordinates as the basis of the quotient.
    pub fn quotient_map(&self) -> Gf2Matrix {
        let n = self.ambient_dim;
        let mut is_pivot = vec![None; n];
        for (k, &p) in self.pivots.iter().enumerate() {
            is_pivot[p] = Some(k);
        }
        let complement: Vec<usize> = (0..n).filter(|&c| is_pivot[c].is_none()).collect();
        let mut q = Gf2Matrix::zeros(complement.len(), n);
        for (m, &j) in complement.iter().enumerate() {
            q.set(m, j, true);
        }
        // a pivot coordinate p_k contributes its basis row's non-pivot entries
        for (k, &p) in self.pivots.iter().enumerate() {
            for (m, &j) in complement.iter().enumerate() {
                if self.basis.get(k, j) {
                    q.set(m, p, true);
                }
            }
        }
        q
    }
}

/// Matrix `R` with `q_tgt = R * q_src` for surjections out of a common space.
pub fn induced_quotient_map(q_src: &Gf2Matrix, q_tgt: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
    if q_src.cols() != q_tgt.cols() {
        return Err(Gf2Error::Shape(format!(
            "quotients of different spaces ({} vs {})",
            q_src.cols(),
            q_tgt.cols()
        )));
    }
    q_src.solve_left(q_tgt).ok_or(Gf2Error::NoFactorization)
}

/// `C(n, k)` with the convention that it is zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic `q`-subsets of `0..n`: the wedge basis of `∧^q GF(2)^n`.
pub fn wedge_basis(n: usize, q: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(q).collect()
}

/// Lexicographic `k`-multisets of `0..n`: the monomial basis of `S^k GF(2)^n`.
pub fn monomial_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations_with_replacement(k).collect()
}

/// `∧^q m`: entry `(S, T)` is the minor `det m[S, T]`.
pub fn exterior_power(m: &Gf2Matrix, q: usize) -> Gf2Matrix {
    let rows = wedge_basis(m.rows(), q);
    let cols = wedge_basis(m.cols(), q);
    if q == 0 {
        return Gf2Matrix::identity(1);
    }
    let mut out = Gf2Matrix::zeros(rows.len(), cols.len());
    // the columns of m restricted to a row subset are reused across T
    for (i, s) in rows.iter().enumerate() {
        let restricted = m.submatrix(s, &(0..m.cols()).collect::<Vec<_>>());
        if restricted.is_zero() {
            continue;
        }
        for (j, t) in cols.iter().enumerate() {
            let minor = restricted.submatrix(&(0..q).collect::<Vec<_>>(), t);
            if minor.det() {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// `S^k m` on monomial bases: the image of `x_{i1}...x_{ik}` is the product
/// of the images of the `x_i`, expanded mod 2.
pub fn sym_power(m: &Gf2Matrix, k: usize) -> Gf2Matrix {
    let rows = monomial_basis(m.rows(), k);
    let cols = monomial_basis(m.cols(), k);
    let index: HashMap<&[usize], usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let images: Vec<Vec<usize>> = (0..m.cols())
        .map(|j| (0..m.rows()).filter(|&i| m.get(i, j)).collect())
        .collect();
    let mut out = Gf2Matrix::zeros(rows.len(), cols.len());
    for (j, mono) in cols.iter().enumerate() {
        let poly = multiply_linear_forms(mono.iter().map(|&x| images[x].as_slice()));
        for term in poly {
            out.toggle(index[term.as_slice()], j);
        }
    }
    out
}

/// Expands a product of linear forms (each given by its support) into the
/// set of monomials with odd coefficient, as sorted index multisets.
pub(crate) fn multiply_linear_forms<'a>(forms: impl Iterator<Item = &'a [usize]>) -> Vec<Vec<usize>> {
    let mut poly: HashMap<Vec<usize>, bool> = HashMap::from([(Vec::new(), true)]);
    for form in forms {
        let mut next: HashMap<Vec<usize>, bool> = HashMap::new();
        for (mono, _) in poly.into_iter().filter(|(_, c)| *c) {
            for &r in form {
                let mut m = mono.clone();
                let pos = m.partition_point(|&x| x <= r);
                m.insert(pos, r);
                let e = next.entry(m).or_insert(false);
                *e = !*e;
            }
        }
        poly = next;
    }
    let mut terms: Vec<Vec<usize>> = poly.into_iter().filter(|(_, c)| *c).map(|(m, _)| m).collect();
    terms.sort();
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut impl Rng, r: usize, c: usize) -> Gf2Matrix {
        Gf2Matrix::from_fn(r, c, |_, _| rng.gen())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        assert_eq!(Gf2Matrix::zeros(4, 7).rank(), 0);
        assert_eq!(Gf2Matrix::from_rows(&[[1, 1], [1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Gf2Matrix::identity(2).kernel_basis().dim(), 0);
        let k = Gf2Matrix::from_rows(&[[1, 1]]).kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis(), &Gf2Matrix::from_rows(&[[1, 1]]));
    }

    #[test]
    fn kernel_of_random_5x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random(&mut rng, 5, 8);
            let k = m.kernel_basis();
            assert_eq!(k.dim(), 8 - m.rank());
            for i in 0..k.dim() {
                assert!(m.mul_vec(&k.basis().row(i)).is_zero());
            }
        }
    }

    #[test]
    fn induced_quotient_examples() {
        let id = Gf2Matrix::identity(2);
        assert_eq!(induced_quotient_map(&id, &id).unwrap(), id);
        // projection killing e1
        let proj = Gf2Matrix::from_rows(&[[0, 1]]);
        assert_eq!(induced_quotient_map(&id, &proj).unwrap(), proj);
        // kernel of source not inside kernel of target
        assert_eq!(
            induced_quotient_map(&proj, &id),
            Err(Gf2Error::NoFactorization)
        );
    }

    #[test]
    fn induced_quotient_random_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..7);
            let k = rng.gen_range(0..n);
            let gens = random(&mut rng, k, n);
            let small = Gf2Subspace::from_rows(&gens);
            let e = rng.gen_range(0..3);
            let extra = random(&mut rng, e, n);
            let big = Gf2Subspace::from_rows(&Gf2Matrix::vstack(n, &[&gens, &extra]));
            let (qs, qt) = (small.quotient_map(), big.quotient_map());
            let r = induced_quotient_map(&qs, &qt).unwrap();
            assert_eq!(r.mul(&qs), qt);
        }
    }

    #[test]
    fn quotient_map_kernel_is_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..9);
            let k = rng.gen_range(0..n + 1);
            let s = Gf2Subspace::from_rows(&random(&mut rng, k, n));
            let q = s.quotient_map();
            assert_eq!(q.rows(), n - s.dim());
            assert_eq!(q.rank(), q.rows());
            assert_eq!(q.kernel_basis(), s);
        }
    }

    #[test]
    fn exterior_power_examples() {
        assert_eq!(exterior_power(&Gf2Matrix::identity(3), 2), Gf2Matrix::identity(3));
        let m = Gf2Matrix::identity(2);
        let w = exterior_power(&m, 3);
        assert_eq!((w.rows(), w.cols()), (0, 0));
        let rect = Gf2Matrix::zeros(4, 2);
        assert_eq!(exterior_power(&rect, 3).cols(), 0);
        assert_eq!(exterior_power(&rect, 0), Gf2Matrix::identity(1));
    }

    /// Brute force: expand (m e_i) ∧ (m e_j) in the wedge basis.
    fn wedge2_oracle(m: &Gf2Matrix) -> Gf2Matrix {
        let basis = wedge_basis(m.rows(), 2);
        let cols = wedge_basis(m.cols(), 2);
        let mut out = Gf2Matrix::zeros(basis.len(), cols.len());
        for (c, t) in cols.iter().enumerate() {
            let (a, b) = (m.column(t[0]), m.column(t[1]));
            for x in a.ones() {
                for y in b.ones() {
                    if x == y {
                        continue; // v ∧ v = 0
                    }
                    let key = vec![x.min(y), x.max(y)];
                    let r = basis.iter().position(|s| *s == key).unwrap();
                    out.toggle(r, c);
                }
            }
        }
        out
    }

    #[test]
    fn exterior_square_matches_expansion() {
        let m = Gf2Matrix::from_rows(&[[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let expected = wedge2_oracle(&m);
        // basis {01, 02, 12}; e0∧e1 -> e0∧(e0+e1) = e0∧e1
        assert_eq!(
            expected,
            Gf2Matrix::from_rows(&[[1, 0, 0], [0, 1, 1], [0, 0, 1]])
        );
        assert_eq!(exterior_power(&m, 2), expected);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let (r, c) = (rng.gen_range(2..6), rng.gen_range(2..6));
            let m = random(&mut rng, r, c);
            assert_eq!(exterior_power(&m, 2), wedge2_oracle(&m));
        }
    }

    #[test]
    fn sym_power_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random(&mut rng, 3, 4);
        assert_eq!(sym_power(&m, 1), m);
        let id = sym_power(&Gf2Matrix::identity(3), 3);
        assert_eq!(id, Gf2Matrix::identity(binomial(5, 3) as usize));
        // x -> x, y -> x + y; basis x², xy, y²
        // x² -> x², xy -> x² + xy, y² -> x² + y² (cross term vanishes)
        let s = sym_power(&Gf2Matrix::from_rows(&[[1, 1], [0, 1]]), 2);
        assert_eq!(s, Gf2Matrix::from_rows(&[[1, 1, 1], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(sym_power(&m, 0), Gf2Matrix::identity(1));
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, -1), 0);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut found = 0;
        while found < 20 {
            let m = random(&mut rng, 6, 6);
            match m.inverse() {
                Ok(inv) => {
                    assert_eq!(inv.mul(&m), Gf2Matrix::identity(6));
                    assert_eq!(m.mul(&inv), Gf2Matrix::identity(6));
                    found += 1;
                }
                Err(e) => {
                    assert_eq!(e, Gf2Error::Singular);
                    assert!(m.rank() < 6);
                }
            }
        }
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = Gf2Matrix> {
        (1..=max, 1..=max)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(any::<bool>(), r * c)))
            .prop_map(|(r, c, bits)| Gf2Matrix::from_fn(r, c, |i, j| bits[i * c + j]))
    }

    fn arb_square(n: usize) -> impl Strategy<Value = Gf2Matrix> {
        proptest::collection::vec(any::<bool>(), n * n)
            .prop_map(move |bits| Gf2Matrix::from_fn(n, n, |i, j| bits[i * n + j]))
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(70)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(m.rank() <= m.rows().min(m.cols()));
            prop_assert_eq!(m.kernel_basis().dim() + m.rank(), m.cols());
        }

        #[test]
        fn powers_are_functorial(a in arb_square(4), b in arb_square(4), q in 0usize..=3) {
            let ab = a.mul(&b);
            prop_assert_eq!(exterior_power(&ab, q), exterior_power(&a, q).mul(&exterior_power(&b, q)));
            prop_assert_eq!(sym_power(&ab, q), sym_power(&a, q).mul(&sym_power(&b, q)));
        }

        #[test]
        fn wide_rank_matches_direct(m in arb_matrix(12)) {
            let wide = Gf2Matrix::hstack(m.rows(), &[&m, &m, &m, &m, &m]);
            prop_assert_eq!(wide.rank(), m.rank());
        }
    }
}
