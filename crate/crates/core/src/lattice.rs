//! Integer lattices with arbitrary-precision entries.
//!
//! Vectors are rows; a sublattice is presented by the rows of a matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Subspace};

pub type IntVector = Vec<BigInt>;

pub fn int_vector(entries: &[i64]) -> IntVector {
    entries.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len(), "pairing of vectors of different length");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major integer matrix; `cols` is kept explicitly so empty matrices
/// still know their ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<IntVector>,
}

impl IntMatrix {
    pub fn new(cols: usize, rows: Vec<IntVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row of length {} in {cols}-column matrix", r.len());
        }
        Self { cols, rows }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        Self::new(cols, rows.iter().map(|r| int_vector(r)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(cols, vec![vec![BigInt::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<IntVector> {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self::new(self.rows.len(), rows)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.nrows());
        let t = rhs.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| t.rows.iter().map(|c| dot(r, c)).collect())
            .collect();
        IntMatrix::new(rhs.cols, rows)
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.rows[i].iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.nrows(), self.cols, "determinant of a non-square matrix");
        let n = self.cols;
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        hnf(self).rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", s.join(" "))?;
        }
        Ok(())
    }
}

/// Row Hermite normal form together with a unimodular `u` such that
/// `h = u * m`. Pivots are positive, entries above a pivot are reduced into
/// `[0, pivot)`, and zero rows sit at the bottom.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let n = m.nrows();
    let mut h = m.rows.clone();
    let mut u = IntMatrix::identity(n).rows;
    let mut r = 0;
    for c in 0..m.cols {
        if r == n {
            break;
        }
        // fold every lower entry of the column into row r
        for i in r + 1..n {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let a = h[r][c].clone();
            let b = h[i][c].clone();
            let eg = a.extended_gcd(&b);
            let (x, y, g) = (eg.x, eg.y, eg.gcd);
            let (ag, bg) = (&a / &g, &b / &g);
            combine(&mut h, r, i, &x, &y, &bg, &ag);
            combine(&mut u, r, i, &x, &y, &bg, &ag);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate(&mut h[r]);
            negate(&mut u[r]);
        }
        let p = h[r][c].clone();
        for i in 0..r {
            let q = h[i][c].div_floor(&p);
            if !q.is_zero() {
                sub_multiple(&mut h, i, r, &q);
                sub_multiple(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (IntMatrix::new(m.cols, h), IntMatrix::new(n, u))
}

/// `(row_r, row_i) <- (x row_r + y row_i, -bg row_r + ag row_i)`.
fn combine(rows: &mut [IntVector], r: usize, i: usize, x: &BigInt, y: &BigInt, bg: &BigInt, ag: &BigInt) {
    let len = rows[r].len();
    for k in 0..len {
        let (s, t) = (rows[r][k].clone(), rows[i][k].clone());
        rows[r][k] = x * &s + y * &t;
        rows[i][k] = ag * &t - bg * &s;
    }
}

fn negate(row: &mut IntVector) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn sub_multiple(rows: &mut [IntVector], dst: usize, src: usize, q: &BigInt) {
    for k in 0..rows[dst].len() {
        let s = &rows[src][k] * q;
        rows[dst][k] -= s;
    }
}

pub fn hnf(m: &IntMatrix) -> IntMatrix {
    hnf_with_transform(m).0
}

/// HNF with zero rows dropped: the canonical basis of the row lattice.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let h = hnf(m);
    let cols = h.cols;
    IntMatrix::new(
        cols,
        h.rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect(),
    )
}

/// Basis of `{x in Z^cols : m x = 0}`, HNF-normalized.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf_with_transform(&m.transpose());
    let rows = (0..h.nrows())
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.rows[i].clone())
        .collect();
    lattice_basis(&IntMatrix::new(m.cols, rows))
}

/// Basis of `span_R(generators) ∩ Z^d`.
pub fn saturate(generators: &IntMatrix) -> IntMatrix {
    lattice_basis(&integer_kernel(&integer_kernel(generators)))
}

pub fn primitive(v: &[BigInt]) -> Result<IntVector> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn mod2(v: &[BigInt]) -> crate::gf2::Gf2Vector {
    crate::gf2::Gf2Vector::from_bits(v.iter().map(|x| x.is_odd()))
}

pub fn mod2_matrix(m: &IntMatrix) -> Gf2Matrix {
    Gf2Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m.rows[i][j].is_odd())
}

pub fn mod2_image(vectors: &IntMatrix) -> Gf2Subspace {
    Gf2Subspace::from_rows(&mod2_matrix(vectors))
}

/// Membership of `v` in the row lattice of `basis` (rows independent).
pub fn in_lattice(basis: &IntMatrix, v: &[BigInt]) -> bool {
    let mut rows = basis.rows.clone();
    rows.push(v.to_vec());
    lattice_basis(&IntMatrix::new(basis.cols, rows)) == lattice_basis(basis)
}
