//! Dense complex matrices, the universal numeric carrier.
//!
//! A thin wrapper around `nalgebra::DMatrix<Complex64>` that enforces
//! finiteness on construction and exposes row-major entry access for
//! serialization and the C ABI.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_rows_vec(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        // DMatrix::from_vec is column-major; transpose the layout.
        let inner = DMatrix::from_fn(rows, cols, |r, c| entries[r * cols + c]);
        Ok(Self { inner })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, &mut f),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Column vector from a slice.
    pub fn column_from(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), 1, |r, _| v[r])
    }

    pub(crate) fn from_na(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    pub(crate) fn as_na(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.inner[(r, c)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.inner[(r, c)] = v;
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.inner[(r, c)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            inner: self.inner.conjugate(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            inner: &self.inner * s,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        crate::numerics::singular_values(self).iter().sum()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        crate::numerics::singular_values(self)
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Copies out the block of size `nr x nc` with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self {
            inner: self.inner.view((r0, c0), (nr, nc)).into_owned(),
        }
    }

    /// Writes `b` into the block with top-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        self.inner
            .view_mut((r0, c0), (b.rows(), b.cols()))
            .copy_from(&b.inner);
    }

    /// Embeds this matrix into a larger zero matrix at `(r0, c0)`.
    pub fn embedded(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        out.set_block(r0, c0, self);
        out
    }

    /// Row-major vectorization.
    pub fn vec_row_major(&self) -> Vec<Complex64> {
        self.entries_row_major()
    }

    /// Inverse of [`vec_row_major`](Self::vec_row_major).
    pub fn unvec_row_major(rows: usize, cols: usize, v: &[Complex64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |r, c| v[r * cols + c])
    }

    /// Frobenius norm of `self - self^dag`.
    pub fn hermiticity_residual(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol * self.frobenius_norm().max(1.0)
    }

    /// `P^2 = P = P^dag` within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.frobenius_norm().max(1.0);
        self.hermiticity_residual() <= tol * scale
            && (&(self * self) - self).frobenius_norm() <= tol * scale
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let d = self.rows();
        (&(&self.adjoint() * self) - &Self::identity(d)).frobenius_norm() <= tol * (d as f64).sqrt()
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix {
                    inner: &self.inner $op &rhs.inner,
                }
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);
