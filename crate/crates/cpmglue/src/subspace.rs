//! Orthogonal block decompositions of source and target spaces, the
//! subspace-preserving (SP) test, SP block decomposition, and the general
//! (A, B, C)-triple constructor for SP maps.
//!
//! Subspaces are canonical coordinate blocks: the source space is the first
//! `s1_dim` coordinates orthogonally summed with the remaining `s2_dim`,
//! likewise the target. Arbitrary subspaces are handled by the caller
//! conjugating with a basis-change unitary.

use num_complex::Complex64;

use crate::channel::{ChoiMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::numerics::{self, DEFAULT_TOL};

/// Orthogonal decomposition dims of the source and target spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSplit {
    pub s1_dim: usize,
    pub s2_dim: usize,
    pub t1_dim: usize,
    pub t2_dim: usize,
}

/// Which summand of a split a compressed channel lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockIndex {
    First,
    Second,
}

impl BlockSplit {
    pub fn new(s1_dim: usize, s2_dim: usize, t1_dim: usize, t2_dim: usize) -> Result<Self> {
        if s1_dim == 0 || s2_dim == 0 || t1_dim == 0 || t2_dim == 0 {
            return Err(Error::InvalidInput(
                "every subspace must be at least one-dimensional".into(),
            ));
        }
        Ok(Self {
            s1_dim,
            s2_dim,
            t1_dim,
            t2_dim,
        })
    }

    /// Square split on equal source and target decompositions.
    pub fn symmetric(d1: usize, d2: usize) -> Result<Self> {
        Self::new(d1, d2, d1, d2)
    }

    pub fn source_dim(&self) -> usize {
        self.s1_dim + self.s2_dim
    }

    pub fn target_dim(&self) -> usize {
        self.t1_dim + self.t2_dim
    }

    fn coordinate_projector(dim: usize, start: usize, len: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, dim, |r, c| {
            if r == c && r >= start && r < start + len {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn ps1(&self) -> ComplexMatrix {
        Self::coordinate_projector(self.source_dim(), 0, self.s1_dim)
    }

    pub fn ps2(&self) -> ComplexMatrix {
        Self::coordinate_projector(self.source_dim(), self.s1_dim, self.s2_dim)
    }

    pub fn pt1(&self) -> ComplexMatrix {
        Self::coordinate_projector(self.target_dim(), 0, self.t1_dim)
    }

    pub fn pt2(&self) -> ComplexMatrix {
        Self::coordinate_projector(self.target_dim(), self.t1_dim, self.t2_dim)
    }

    pub(crate) fn check_channel_dims(&self, phi: &KrausChannel) -> Result<()> {
        if phi.source_dim() != self.source_dim() || phi.target_dim() != self.target_dim() {
            return Err(Error::InvalidInput(format!(
                "channel is {}x{} but split expects source {} and target {}",
                phi.target_dim(),
                phi.source_dim(),
                self.source_dim(),
                self.target_dim()
            )));
        }
        Ok(())
    }

    /// Flattened Choi index of the pair (target coordinate, source coordinate).
    fn choi_index(&self, a: usize, alpha: usize) -> usize {
        a * self.source_dim() + alpha
    }

    /// Choi indices carrying the (t1, s1) block, ordered row-major by
    /// (target index, source index).
    pub(crate) fn v_support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.t1_dim * self.s1_dim);
        for a in 0..self.t1_dim {
            for alpha in 0..self.s1_dim {
                out.push(self.choi_index(a, alpha));
            }
        }
        out
    }

    /// Choi indices carrying the (t2, s2) block.
    pub(crate) fn w_support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.t2_dim * self.s2_dim);
        for a in 0..self.t2_dim {
            for alpha in 0..self.s2_dim {
                out.push(self.choi_index(self.t1_dim + a, self.s1_dim + alpha));
            }
        }
        out
    }

    fn target_block(&self, a: usize) -> BlockIndex {
        if a < self.t1_dim {
            BlockIndex::First
        } else {
            BlockIndex::Second
        }
    }

    fn source_block(&self, alpha: usize) -> BlockIndex {
        if alpha < self.s1_dim {
            BlockIndex::First
        } else {
            BlockIndex::Second
        }
    }
}

/// Frobenius weight of the Choi entries forbidden by the four-term SP block
/// identity. A channel is SP iff this vanishes.
pub fn sp_residual(phi: &KrausChannel, split: &BlockSplit) -> Result<f64> {
    split.check_channel_dims(phi)?;
    let choi = phi.choi();
    Ok(sp_residual_of_choi(&choi, split))
}

pub(crate) fn sp_residual_of_choi(choi: &ChoiMatrix, split: &BlockSplit) -> f64 {
    let s = split.source_dim();
    let t = split.target_dim();
    let mut sq = 0.0;
    for a in 0..t {
        for alpha in 0..s {
            let row_ok = split.target_block(a) == split.source_block(alpha);
            for b in 0..t {
                for beta in 0..s {
                    let col_ok = split.target_block(b) == split.source_block(beta);
                    if !(row_ok && col_ok) {
                        sq += choi
                            .matrix
                            .get(split.choi_index(a, alpha), split.choi_index(b, beta))
                            .norm_sqr();
                    }
                }
            }
        }
    }
    sq.sqrt()
}

/// True iff the Choi matrix has no weight (up to `tol * trace`) outside the
/// blocks allowed by the four-term SP decomposition.
pub fn is_sp(phi: &KrausChannel, split: &BlockSplit, tol: f64) -> Result<bool> {
    split.check_channel_dims(phi)?;
    let choi = phi.choi();
    let residual = sp_residual_of_choi(&choi, split);
    Ok(residual <= tol * choi.matrix.trace().re.max(1.0))
}

/// Diagonal-block restrictions of an SP channel, with compressed dims.
pub fn sp_blocks(phi: &KrausChannel, split: &BlockSplit) -> Result<(KrausChannel, KrausChannel)> {
    split.check_channel_dims(phi)?;
    let choi = phi.choi();
    let residual = sp_residual_of_choi(&choi, split);
    if residual > DEFAULT_TOL * choi.matrix.trace().re.max(1.0) {
        return Err(Error::NotSubspacePreserving { residual });
    }
    let phi1 = KrausChannel::new(
        split.s1_dim,
        split.t1_dim,
        phi.kraus()
            .iter()
            .map(|v| v.block(0, 0, split.t1_dim, split.s1_dim))
            .collect(),
    )?;
    let phi2 = KrausChannel::new(
        split.s2_dim,
        split.t2_dim,
        phi.kraus()
            .iter()
            .map(|v| v.block(split.t1_dim, split.s1_dim, split.t2_dim, split.s2_dim))
            .collect(),
    )?;
    Ok((phi1, phi2))
}

/// Places a compressed block channel back into the full decomposed space,
/// undoing the compression performed by restriction.
pub fn embed_block(phi: &KrausChannel, split: &BlockSplit, which: BlockIndex) -> Result<KrausChannel> {
    let (exp_s, exp_t, r0, c0) = match which {
        BlockIndex::First => (split.s1_dim, split.t1_dim, 0, 0),
        BlockIndex::Second => (split.s2_dim, split.t2_dim, split.t1_dim, split.s1_dim),
    };
    if phi.source_dim() != exp_s || phi.target_dim() != exp_t {
        return Err(Error::InvalidInput(
            "block channel dims do not match the split".into(),
        ));
    }
    KrausChannel::new(
        split.source_dim(),
        split.target_dim(),
        phi.kraus()
            .iter()
            .map(|v| v.embedded(split.target_dim(), split.source_dim(), r0, c0))
            .collect(),
    )
}

/// The (A, B, C) data of the general SP generator, relative to operator
/// bases of the two diagonal blocks.
#[derive(Debug, Clone)]
pub struct SpTriple {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub basis_v: Vec<ComplexMatrix>,
    pub basis_w: Vec<ComplexMatrix>,
}

/// Per-condition residuals of the SP-triple validity check.
#[derive(Debug, Clone)]
pub struct SpTripleDiagnostics {
    /// How far A is from PSD (clipped negative eigenvalue magnitude).
    pub a_psd_residual: f64,
    pub b_psd_residual: f64,
    /// `max(||P_{A,0} C||, ||C P_{B,0}||)`.
    pub zero_space_leak: f64,
    /// How far `A - C B^- C^dag` is from PSD.
    pub schur_residual: f64,
    pub pass: bool,
}

impl SpTriple {
    /// Matrix-unit bases ordered row-major by (target index, source index).
    pub fn matrix_unit_bases(split: &BlockSplit) -> (Vec<ComplexMatrix>, Vec<ComplexMatrix>) {
        let unit = |rows: usize, cols: usize, r: usize, c: usize| {
            let mut m = ComplexMatrix::zeros(rows, cols);
            m.set(r, c, Complex64::new(1.0, 0.0));
            m
        };
        let mut basis_v = Vec::with_capacity(split.t1_dim * split.s1_dim);
        for a in 0..split.t1_dim {
            for alpha in 0..split.s1_dim {
                basis_v.push(unit(split.t1_dim, split.s1_dim, a, alpha));
            }
        }
        let mut basis_w = Vec::with_capacity(split.t2_dim * split.s2_dim);
        for a in 0..split.t2_dim {
            for alpha in 0..split.s2_dim {
                basis_w.push(unit(split.t2_dim, split.s2_dim, a, alpha));
            }
        }
        (basis_v, basis_w)
    }

    /// Builds a triple on the canonical matrix-unit bases.
    pub fn on_matrix_units(
        split: &BlockSplit,
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
    ) -> Result<Self> {
        let (basis_v, basis_w) = Self::matrix_unit_bases(split);
        let triple = Self {
            a,
            b,
            c,
            basis_v,
            basis_w,
        };
        triple.check_shapes(split)?;
        Ok(triple)
    }

    fn check_shapes(&self, split: &BlockSplit) -> Result<()> {
        let k = split.t1_dim * split.s1_dim;
        let l = split.t2_dim * split.s2_dim;
        if self.basis_v.len() != k || self.basis_w.len() != l {
            return Err(Error::InvalidInput("basis length mismatch".into()));
        }
        if self.a.rows() != k || self.a.cols() != k {
            return Err(Error::InvalidInput(format!("A must be {k}x{k}")));
        }
        if self.b.rows() != l || self.b.cols() != l {
            return Err(Error::InvalidInput(format!("B must be {l}x{l}")));
        }
        if self.c.rows() != k || self.c.cols() != l {
            return Err(Error::InvalidInput(format!("C must be {k}x{l}")));
        }
        Ok(())
    }
}

/// Reports the residual of every validity condition on (A, B, C).
pub fn validate_sp_triple(triple: &SpTriple, tol: f64) -> Result<SpTripleDiagnostics> {
    let min_eig = |m: &ComplexMatrix| -> Result<f64> {
        let eig = numerics::hermitian_eigen_lenient(m)?;
        Ok(eig.values.iter().cloned().fold(f64::INFINITY, f64::min))
    };
    let scale_a = triple.a.frobenius_norm().max(1.0);
    let scale_b = triple.b.frobenius_norm().max(1.0);
    let a_psd_residual = (-min_eig(&triple.a)?).max(0.0);
    let b_psd_residual = (-min_eig(&triple.b)?).max(0.0);

    let a_pass = a_psd_residual <= tol * scale_a;
    let b_pass = b_psd_residual <= tol * scale_b;

    let (zero_space_leak, schur_residual) = if a_pass && b_pass {
        let pa0 = numerics::zero_space_projector(&triple.a, tol)?;
        let pb0 = numerics::zero_space_projector(&triple.b, tol)?;
        let leak_a = (&pa0 * &triple.c).frobenius_norm();
        let leak_b = (&triple.c * &pb0).frobenius_norm();
        let b_pinv = numerics::pseudoinverse(&triple.b, tol)?;
        let schur = &triple.a - &(&(&triple.c * &b_pinv) * &triple.c.adjoint());
        let schur_residual = (-min_eig(&schur)?).max(0.0);
        (leak_a.max(leak_b), schur_residual)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };

    let c_scale = triple.c.frobenius_norm().max(1.0);
    let pass = a_pass
        && b_pass
        && zero_space_leak <= tol * c_scale
        && schur_residual <= tol * scale_a.max(scale_b);
    Ok(SpTripleDiagnostics {
        a_psd_residual,
        b_psd_residual,
        zero_space_leak,
        schur_residual,
        pass,
    })
}

fn first_violation(d: &SpTripleDiagnostics, triple: &SpTriple, tol: f64) -> Option<crate::error::SpTripleViolation> {
    use crate::error::SpTripleViolation::*;
    let scale_a = triple.a.frobenius_norm().max(1.0);
    let scale_b = triple.b.frobenius_norm().max(1.0);
    let c_scale = triple.c.frobenius_norm().max(1.0);
    if d.a_psd_residual > tol * scale_a {
        Some(ANotPsd)
    } else if d.b_psd_residual > tol * scale_b {
        Some(BNotPsd)
    } else if d.zero_space_leak > tol * c_scale {
        Some(ZeroSpaceLeak)
    } else if d.schur_residual > tol * scale_a.max(scale_b) {
        Some(SchurViolation)
    } else {
        None
    }
}

/// Assembles the SP map of a valid (A, B, C) triple as a Kraus channel.
pub fn build_sp(triple: &SpTriple, split: &BlockSplit) -> Result<KrausChannel> {
    triple.check_shapes(split)?;
    let diag = validate_sp_triple(triple, DEFAULT_TOL)?;
    if let Some(v) = first_violation(&diag, triple, DEFAULT_TOL) {
        return Err(Error::InvalidSpTriple(v));
    }
    let choi = assemble_choi(triple, split);
    // Tolerant extraction: tiny negative eigenvalues can appear after the
    // Schur condition is satisfied only within tolerance.
    KrausChannel::from_choi(&choi, 1e-7)
}

/// The Choi matrix of the (A, B, C) generator, without validity checks.
pub(crate) fn assemble_choi(triple: &SpTriple, split: &BlockSplit) -> ChoiMatrix {
    let s = split.source_dim();
    let t = split.target_dim();
    let n = s * t;
    let vecs_v: Vec<ComplexMatrix> = triple
        .basis_v
        .iter()
        .map(|v| ComplexMatrix::column_from(&v.embedded(t, s, 0, 0).vec_row_major()))
        .collect();
    let vecs_w: Vec<ComplexMatrix> = triple
        .basis_w
        .iter()
        .map(|w| {
            ComplexMatrix::column_from(
                &w.embedded(t, s, split.t1_dim, split.s1_dim).vec_row_major(),
            )
        })
        .collect();
    let mut m = ComplexMatrix::zeros(n, n);
    for (k, xk) in vecs_v.iter().enumerate() {
        for (k2, xk2) in vecs_v.iter().enumerate() {
            m = &m + &(&xk.scale(triple.a.get(k, k2)) * &xk2.adjoint());
        }
    }
    for (l, wl) in vecs_w.iter().enumerate() {
        for (l2, wl2) in vecs_w.iter().enumerate() {
            m = &m + &(&wl.scale(triple.b.get(l, l2)) * &wl2.adjoint());
        }
    }
    for (k, xk) in vecs_v.iter().enumerate() {
        for (l, wl) in vecs_w.iter().enumerate() {
            let cross = &xk.scale(triple.c.get(k, l)) * &wl.adjoint();
            m = &m + &cross;
            m = &m + &cross.adjoint();
        }
    }
    ChoiMatrix {
        matrix: m,
        source_dim: s,
        target_dim: t,
    }
}

/// Reads (A, B, C) of an SP channel back off its Choi matrix, relative to
/// the canonical matrix-unit bases.
pub fn extract_sp_triple(phi: &KrausChannel, split: &BlockSplit) -> Result<SpTriple> {
    split.check_channel_dims(phi)?;
    let choi = phi.choi();
    let residual = sp_residual_of_choi(&choi, split);
    if residual > DEFAULT_TOL * choi.matrix.trace().re.max(1.0) {
        return Err(Error::NotSubspacePreserving { residual });
    }
    let vi = split.v_support();
    let wi = split.w_support();
    let a = ComplexMatrix::from_fn(vi.len(), vi.len(), |k, k2| choi.matrix.get(vi[k], vi[k2]));
    let b = ComplexMatrix::from_fn(wi.len(), wi.len(), |l, l2| choi.matrix.get(wi[l], wi[l2]));
    let c = ComplexMatrix::from_fn(vi.len(), wi.len(), |k, l| choi.matrix.get(vi[k], wi[l]));
    SpTriple::on_matrix_units(split, a, b, c)
}
