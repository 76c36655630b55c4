//! Minimal dense linear algebra: row-major matrices, vectors, and an
//! LU solver with partial pivoting. Sized for the small systems this
//! crate produces (beam stiffness up to a few hundred DOFs, damped
//! normal equations up to a few hundred weights).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot smaller than this fraction of the
/// largest entry of the input matrix is treated as zero. Relative rather
/// than absolute because stiffness entries span several orders of
/// magnitude in SI units.
const PIVOT_RTOL: f64 = 1e-12;

/// Dense row-major matrix of `f64`. Entries are validated finite on
/// construction and immutable through the public API except via
/// `IndexMut`, which is used by builders before any solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from nested rows; handy in tests and element matrices.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    what: "row length",
                    expected: c,
                    actual: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(r, c, entries)
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `A·x`.
    pub fn mul_vec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "matrix-vector product",
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x.as_slice());
        }
        DenseVector::new(out)
    }

    /// `Aᵀ·y`, without forming the transpose.
    pub fn tr_mul_vec(&self, y: &DenseVector) -> Result<DenseVector> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                what: "transposed matrix-vector product",
                expected: self.rows,
                actual: y.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        DenseVector::new(out)
    }

    /// Gram matrix `AᵀA`, accumulated row by row over the upper triangle
    /// and mirrored. This is the hot path of the damped normal equations.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                let dst = &mut g.entries[i * n..(i + 1) * n];
                for (d, rj) in dst[i..].iter_mut().zip(&row[i..]) {
                    *d += ri * rj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.entries[i * n + j] = g.entries[j * n + i];
            }
        }
        g
    }

    /// `A + s·I`.
    pub fn add_scaled_identity(&self, s: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                what: "square matrix",
                expected: self.rows,
                actual: self.cols,
            });
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += s;
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }
}

impl core::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Dense vector of `f64`, finite on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    entries: Vec<f64>,
}

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("vector entry"));
        }
        Ok(Self { entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }
}

impl core::ops::Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

impl core::ops::IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.entries[i]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `a·x = b` by LU decomposition with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when a pivot falls below
/// `1e-12` times the largest entry of `a`.
pub fn lu_solve(a: &DenseMatrix, b: &DenseVector) -> Result<DenseVector> {
    lu_solve_with_tol(a, b, PIVOT_RTOL * a.max_abs())
}

fn lu_solve_with_tol(a: &DenseMatrix, b: &DenseVector, tol: f64) -> Result<DenseVector> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            what: "square system matrix",
            expected: a.rows,
            actual: a.cols,
        });
    }
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: a.rows,
            actual: b.len(),
        });
    }
    let n = a.rows;
    let mut lu = a.entries.clone();
    let mut x = b.entries.clone();

    for k in 0..n {
        // Partial pivoting: bring the largest remaining entry of column k
        // onto the diagonal.
        let mut pivot_row = k;
        let mut pivot_mag = libm::fabs(lu[k * n + k]);
        for i in (k + 1)..n {
            let mag = libm::fabs(lu[i * n + k]);
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag <= tol || pivot_mag == 0.0 {
            return Err(Error::SingularMatrix);
        }
        if pivot_row != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot_row * n + j);
            }
            x.swap(k, pivot_row);
        }
        let pivot = lu[k * n + k];
        for i in (k + 1)..n {
            let factor = lu[i * n + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            lu[i * n + k] = 0.0;
            for j in (k + 1)..n {
                lu[i * n + j] -= factor * lu[k * n + j];
            }
            x[i] -= factor * x[k];
        }
    }

    // Back substitution.
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in (k + 1)..n {
            s -= lu[k * n + j] * x[j];
        }
        x[k] = s / lu[k * n + k];
    }

    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    DenseVector::new(x)
}

/// Solves the damped system `(jtj + mu·I)·x = rhs`.
///
/// With `mu > 0` the system is strictly positive definite whenever
/// `jtj` is positive semidefinite, so failure is only possible at
/// `mu = 0` with singular `jtj`. For that reason the positive-μ path
/// rejects only exact zero pivots: a column of `jtj` that is exactly
/// zero (a dead parameter) still carries the pivot μ and a zero
/// right-hand side, which solves to an exact zero step component that
/// the relative threshold of [`lu_solve`] would spuriously reject.
pub fn solve_damped(jtj: &DenseMatrix, mu: f64, rhs: &DenseVector) -> Result<DenseVector> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::InvalidConfig("damping mu must be finite and >= 0"));
    }
    if mu == 0.0 {
        return lu_solve(jtj, rhs);
    }
    let damped = jtj.add_scaled_identity(mu)?;
    lu_solve_with_tol(&damped, rhs, 0.0)
}
