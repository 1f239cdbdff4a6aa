//! Completely positive maps represented by Kraus operator lists, their
//! Choi matrices, and classification.
//!
//! Conventions, fixed globally:
//! - Choi matrix: `sum_ij phi(E_ij) (x) E_ij` with `E_ij` the matrix units
//!   of the source space.
//! - With this Kronecker ordering an operator `V` contributes the rank-one
//!   term `vec(V) vec(V)^dag` with row-major vectorization, so Kraus
//!   extraction un-vectorizes Choi eigenvectors row-major.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::numerics::{self, DEFAULT_TOL};

/// A CPM given as a finite Kraus operator list.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    source_dim: usize,
    target_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

/// The Choi representation of a CPM.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// CP/TP verdicts and the Kraus number.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub is_cp: bool,
    pub is_tp: bool,
    pub kraus_number: usize,
    pub tp_residual: f64,
    pub min_choi_eigenvalue: f64,
}

/// Which side of the map a restriction acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl KrausChannel {
    pub fn new(source_dim: usize, target_dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if source_dim == 0 || target_dim == 0 {
            return Err(Error::InvalidInput("zero-dimensional space".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidInput("empty Kraus list".into()));
        }
        for (i, v) in kraus.iter().enumerate() {
            if v.rows() != target_dim || v.cols() != source_dim {
                return Err(Error::InvalidInput(format!(
                    "Kraus operator {i} is {}x{}, expected {target_dim}x{source_dim}",
                    v.rows(),
                    v.cols()
                )));
            }
        }
        Ok(Self {
            source_dim,
            target_dim,
            kraus,
        })
    }

    /// The identity channel on a `dim`-dimensional space.
    pub fn identity(dim: usize) -> Self {
        Self::new(dim, dim, vec![ComplexMatrix::identity(dim)]).expect("valid")
    }

    /// The unitary channel `Q -> U Q U^dag`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(DEFAULT_TOL) {
            return Err(Error::InvalidInput("operator is not unitary".into()));
        }
        let d = u.rows();
        Self::new(d, d, vec![u])
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `phi(Q) = sum_k V_k Q V_k^dag`.
    pub fn apply(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        if q.rows() != self.source_dim || q.cols() != self.source_dim {
            return Err(Error::InvalidInput(format!(
                "state is {}x{}, expected {}x{}",
                q.rows(),
                q.cols(),
                self.source_dim,
                self.source_dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.target_dim, self.target_dim);
        for v in &self.kraus {
            out = &out + &(&(v * q) * &v.adjoint());
        }
        Ok(out)
    }

    /// `sum_ij phi(E_ij) (x) E_ij`, computed directly as
    /// `sum_k vec(V_k) vec(V_k)^dag` with row-major vectorization.
    pub fn choi(&self) -> ChoiMatrix {
        let n = self.source_dim * self.target_dim;
        let mut m = ComplexMatrix::zeros(n, n);
        for v in &self.kraus {
            let x = ComplexMatrix::column_from(&v.vec_row_major());
            m = &m + &(&x * &x.adjoint());
        }
        ChoiMatrix {
            matrix: m,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
        }
    }

    /// `sum_k V_k^dag V_k`; equals the identity iff the map is TP.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.source_dim, self.source_dim);
        for v in &self.kraus {
            s = &s + &(&v.adjoint() * v);
        }
        s
    }

    pub fn classify(&self) -> ChannelReport {
        self.classify_at(DEFAULT_TOL)
    }

    pub fn classify_at(&self, tol: f64) -> ChannelReport {
        let tp_residual =
            (&self.kraus_sum() - &ComplexMatrix::identity(self.source_dim)).frobenius_norm();
        let choi = self.choi();
        let eig = numerics::hermitian_eigen_lenient(&choi.matrix).expect("Choi is Hermitian");
        let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_abs = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        ChannelReport {
            is_cp: min >= -tol * max_abs.max(1.0),
            is_tp: tp_residual <= tol,
            kraus_number: numerics::numeric_rank(&eig.values, tol),
            tp_residual,
            min_choi_eigenvalue: min,
        }
    }

    /// Linearly independent Kraus representation, extracted from the Choi
    /// eigendecomposition with the numerics gauge.
    pub fn linearly_independent(&self) -> Result<KrausChannel> {
        let choi = self.choi();
        KrausChannel::from_choi(&choi, DEFAULT_TOL)
    }

    /// Extracts a linearly independent Kraus representation from a Choi
    /// matrix. Fails if the Choi matrix is not PSD at `tol`.
    pub fn from_choi(choi: &ChoiMatrix, tol: f64) -> Result<KrausChannel> {
        let eig = numerics::hermitian_eigen_lenient(&choi.matrix)?;
        let max_abs = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tol * max_abs.max(1.0) {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: min,
            });
        }
        let cutoff = (tol * max_abs).max(numerics::ABS_FLOOR);
        let n = choi.matrix.rows();
        let mut kraus = Vec::new();
        for (i, &lambda) in eig.values.iter().enumerate() {
            if lambda > cutoff {
                let col = eig.vectors.block(0, i, n, 1);
                let entries: Vec<Complex64> = col.entries_row_major();
                let v = ComplexMatrix::unvec_row_major(choi.target_dim, choi.source_dim, &entries)
                    .scale(Complex64::new(lambda.sqrt(), 0.0));
                kraus.push(v);
            }
        }
        if kraus.is_empty() {
            // The zero map still needs a carrier operator.
            kraus.push(ComplexMatrix::zeros(choi.target_dim, choi.source_dim));
        }
        KrausChannel::new(choi.source_dim, choi.target_dim, kraus)
    }

    /// Composes a projector on the source or target side and compresses the
    /// result to the projector's range.
    pub fn restrict(&self, projector: &ComplexMatrix, side: Side) -> Result<KrausChannel> {
        let space_dim = match side {
            Side::Source => self.source_dim,
            Side::Target => self.target_dim,
        };
        if projector.rows() != space_dim || projector.cols() != space_dim {
            return Err(Error::InvalidInput(format!(
                "projector is {}x{}, expected {space_dim}x{space_dim}",
                projector.rows(),
                projector.cols()
            )));
        }
        if !projector.is_projector(DEFAULT_TOL) {
            return Err(Error::InvalidInput(
                "matrix is not an orthogonal projector".into(),
            ));
        }
        let iso = range_isometry(projector)?;
        let kraus = self
            .kraus
            .iter()
            .map(|v| match side {
                Side::Source => v * &iso,
                Side::Target => &iso.adjoint() * v,
            })
            .collect();
        match side {
            Side::Source => KrausChannel::new(iso.cols(), self.target_dim, kraus),
            Side::Target => KrausChannel::new(self.source_dim, iso.cols(), kraus),
        }
    }

    /// Frobenius norm of the Choi difference; zero iff the maps are equal.
    pub fn distance(&self, other: &KrausChannel) -> Result<f64> {
        if self.source_dim != other.source_dim || self.target_dim != other.target_dim {
            return Err(Error::InvalidInput(
                "channels act between different spaces".into(),
            ));
        }
        Ok((&self.choi().matrix - &other.choi().matrix).frobenius_norm())
    }

    /// Composition `other . self` (this channel first).
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if other.source_dim != self.target_dim {
            return Err(Error::InvalidInput(
                "composition dimension mismatch".into(),
            ));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for w in &other.kraus {
            for v in &self.kraus {
                kraus.push(w * v);
            }
        }
        KrausChannel::new(self.source_dim, other.target_dim, kraus)
    }
}

/// Deterministic isometry whose columns span the range of an orthogonal
/// projector (eigenvectors with eigenvalue one, numerics gauge).
pub fn range_isometry(projector: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = numerics::hermitian_eigen_lenient(projector)?;
    let d = projector.rows();
    let rank = eig.values.iter().filter(|&&v| v > 0.5).count();
    if rank == 0 {
        return Err(Error::InvalidInput("projector has empty range".into()));
    }
    // Eigenvalues sort descending, so the range vectors are the first columns.
    Ok(eig.vectors.block(0, 0, d, rank))
}

/// Unitary `U` with `rep_b[i] = sum_j U[i,j] rep_a[j]`, for two linearly
/// independent representations of the same map.
pub fn kraus_unitary_relation(rep_a: &KrausChannel, rep_b: &KrausChannel) -> Result<ComplexMatrix> {
    let dist = rep_a.distance(rep_b)?;
    if dist > 1e-9 * rep_a.choi().matrix.trace().re.max(1.0) {
        return Err(Error::NotSameChannel { distance: dist });
    }
    let k = rep_a.kraus.len();
    if rep_b.kraus.len() != k {
        return Err(Error::InvalidInput(
            "representations have different lengths".into(),
        ));
    }
    let n = rep_a.source_dim * rep_a.target_dim;
    let amat = ComplexMatrix::from_fn(n, k, |r, c| rep_a.kraus[c].vec_row_major()[r]);
    let bmat = ComplexMatrix::from_fn(n, k, |r, c| rep_b.kraus[c].vec_row_major()[r]);
    let a_svd = numerics::svd(&amat)?;
    if numerics::numeric_rank(&a_svd.singulars, DEFAULT_TOL) < k {
        return Err(Error::InvalidInput(
            "Kraus set is linearly dependent".into(),
        ));
    }
    let b_rank = numerics::numeric_rank(&numerics::svd(&bmat)?.singulars, DEFAULT_TOL);
    if b_rank < k {
        return Err(Error::InvalidInput(
            "Kraus set is linearly dependent".into(),
        ));
    }
    // bmat = amat * U^T, least squares.
    let ut = &numerics::pseudoinverse(&amat, DEFAULT_TOL)? * &bmat;
    let u = ut.transpose();
    if !u.is_unitary(1e-8) {
        return Err(Error::NotSameChannel { distance: dist });
    }
    Ok(u)
}
