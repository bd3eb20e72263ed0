//! Dense complex matrices and vectors.
//!
//! This module is the verification side of the crate: small full matrices
//! used as oracles for the state-vector kernel and the decomposition passes.
//! Nothing on the simulation path builds a `2^q x 2^q` matrix.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default tolerance for [`ComplexMatrix::is_unitary_default`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Dense complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects a length mismatch and
    /// non-finite entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// 2x2 matrix from `[[a, b], [c, d]]`.
    pub fn from_2x2(m: [[C64; 2]; 2]) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column matrix holding `v`.
    pub fn column(v: &ComplexVector) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.as_slice().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column_vector(&self, j: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn as_2x2(&self) -> Option<[[C64; 2]; 2]> {
        (self.rows == 2 && self.cols == 2)
            .then(|| [[self.data[0], self.data[1]], [self.data[2], self.data[3]]])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out.data[i * rhs.cols..(i + 1) * rhs.cols]
                    .iter_mut()
                    .zip(row)
                {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let data = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.as_slice())
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect();
        Ok(ComplexVector::new(data))
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `self` tensored with itself `n` times.
    pub fn kron_pow(&self, n: usize) -> Result<ComplexMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Kronecker power requires n >= 1".into(),
            ));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kron(self);
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - rhs`. Panics on a shape mismatch.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &ComplexMatrix, tol: f64) -> bool {
        self.rows == rhs.rows && self.cols == rhs.cols && self.max_abs_diff(rhs) < tol
    }

    /// True iff every entry of `U*U - I` has modulus below `tol`.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let prod = self.adjoint().matmul(self)?;
        Ok(prod.max_abs_diff(&Self::identity(self.rows)) < tol)
    }

    pub fn is_unitary_default(&self) -> Result<bool> {
        self.is_unitary(UNITARY_TOL)
    }

    /// Multiplies by the phase that makes the first entry of largest modulus
    /// real and positive. Used to compare matrices up to global phase.
    pub fn phase_normalized(&self) -> ComplexMatrix {
        let pivot = self
            .data
            .iter()
            .copied()
            .fold(ZERO, |best, z| if z.norm() > best.norm() + 1e-12 { z } else { best });
        if pivot == ZERO {
            return self.clone();
        }
        self.scale(pivot.conj() / pivot.norm())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a dimension mismatch; use [`ComplexMatrix::matmul`] for the
    /// fallible form.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    /// Standard basis vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.data
    }

    pub fn kron(&self, rhs: &ComplexVector) -> ComplexVector {
        let mut data = Vec::with_capacity(self.len() * rhs.len());
        for &a in &self.data {
            data.extend(rhs.data.iter().map(|&b| a * b));
        }
        Self::new(data)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, rhs: &ComplexVector) -> f64 {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.data).finish()
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn kron_pow(a: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    a.kron_pow(n)
}

/// Kronecker product of a sequence, leftmost factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, m| acc.kron(m))
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    a.is_unitary(tol)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn matvec(a: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    a.matvec(v)
}

/// Coefficients `(c_I, c_X, c_Y, c_Z)` with `m = c_I I + c_X X + c_Y Y + c_Z Z`.
pub fn pauli_coefficients(m: [[C64; 2]; 2]) -> [C64; 4] {
    let [[a, b], [c, d]] = m;
    let half = C64::new(0.5, 0.0);
    [
        (a + d) * half,
        (b + c) * half,
        (c - b) * half * I,
        (a - d) * half,
    ]
}
