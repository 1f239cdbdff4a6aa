//! Building, inverting, analyzing and convexly decomposing SP and LSP
//! gluings via the gluing matrix C.
//!
//! With linearly independent Kraus representations `{V_n}` of the first
//! channel and `{W_m}` of the second, every SP gluing is
//! `phi(Q) = sum_n V_n Q V_n^dag + sum_m W_m Q W_m^dag
//!         + sum_nm C_nm V_n Q W_m^dag + h.c.`
//! with `sigma_max(C) <= 1`, and the correspondence `C <-> gluing` is a
//! bijection once the representations are fixed.

use num_complex::Complex64;

use crate::channel::{ChoiMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::numerics::{self, DEFAULT_TOL};
use crate::subspace::{sp_residual_of_choi, BlockSplit};

/// The coefficient matrix of a gluing's cross terms, bound to the linearly
/// independent Kraus representations it refers to.
///
/// `rep1` operators are `t1 x s1` (compressed), `rep2` operators `t2 x s2`.
#[derive(Debug, Clone)]
pub struct GluingMatrix {
    pub c: ComplexMatrix,
    pub rep1: Vec<ComplexMatrix>,
    pub rep2: Vec<ComplexMatrix>,
}

/// Rank-one coefficient data of an LSP gluing.
#[derive(Debug, Clone)]
pub struct LspVectors {
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
}

impl LspVectors {
    pub fn induced_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.c1.len(), self.c2.len(), |n, m| {
            self.c1[n] * self.c2[m].conj()
        })
    }

    pub fn norms(&self) -> (f64, f64) {
        let n1 = self.c1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n2 = self.c2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (n1, n2)
    }
}

/// Singular-value summary of a gluing matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingAnalysis {
    /// Descending singular values of C.
    pub singulars: Vec<f64>,
    /// `N + M - #{sigma = 1}`, the Kraus number of the glued channel.
    pub predicted_kraus_number: usize,
    /// `sigma_max <= 1 + tol`.
    pub is_valid: bool,
    /// Extreme point of the convex set of gluings: `#{sigma = 1} = min(N, M)`.
    pub is_extreme: bool,
    /// At most one non-zero singular value.
    pub is_lsp: bool,
    /// Number of singular values equal to 1 within tolerance.
    pub ones_count: usize,
}

impl GluingMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.c.rows(), self.c.cols())
    }

    fn check_shape(&self) -> Result<()> {
        if self.c.rows() != self.rep1.len() || self.c.cols() != self.rep2.len() {
            return Err(Error::InvalidInput(format!(
                "C is {}x{} but the representations have lengths {} and {}",
                self.c.rows(),
                self.c.cols(),
                self.rep1.len(),
                self.rep2.len()
            )));
        }
        Ok(())
    }
}

/// Classifies a gluing matrix by its singular values.
pub fn analyze(g: &GluingMatrix, tol: f64) -> Result<GluingAnalysis> {
    analyze_matrix(&g.c, tol)
}

/// [`analyze`] on a bare coefficient matrix.
pub fn analyze_matrix(c: &ComplexMatrix, tol: f64) -> Result<GluingAnalysis> {
    let dec = numerics::svd(c)?;
    let (n, m) = (c.rows(), c.cols());
    let ones_count = dec.singulars.iter().filter(|&&s| (s - 1.0).abs() <= tol).count();
    let nonzero = dec.singulars.iter().filter(|&&s| s > tol).count();
    let smax = dec.singulars.first().cloned().unwrap_or(0.0);
    Ok(GluingAnalysis {
        predicted_kraus_number: n + m - ones_count,
        is_valid: smax <= 1.0 + tol,
        is_extreme: ones_count == n.min(m),
        is_lsp: nonzero <= 1,
        singulars: dec.singulars,
        ones_count,
    })
}

fn check_representation(phi: &KrausChannel, rep: &[ComplexMatrix], t: usize, s: usize) -> Result<()> {
    for v in rep {
        if v.rows() != t || v.cols() != s {
            return Err(Error::NotARepresentation);
        }
    }
    let as_channel = KrausChannel::new(s, t, rep.to_vec())?;
    let dist = phi.distance(&as_channel)?;
    if dist > 1e-8 * phi.choi().matrix.trace().re.max(1.0) {
        return Err(Error::NotARepresentation);
    }
    // Linear independence of the stacked vectorizations.
    let vecs = ComplexMatrix::from_fn(t * s, rep.len(), |r, c| rep[c].vec_row_major()[r]);
    let rank = numerics::numeric_rank(&numerics::svd(&vecs)?.singulars, DEFAULT_TOL);
    if rank < rep.len() {
        return Err(Error::NotARepresentation);
    }
    Ok(())
}

/// Choi matrix of the gluing defined by (rep1, rep2, C) on the split.
fn gluing_choi(g: &GluingMatrix, split: &BlockSplit) -> ChoiMatrix {
    let s = split.source_dim();
    let t = split.target_dim();
    let xs: Vec<ComplexMatrix> = g
        .rep1
        .iter()
        .map(|v| ComplexMatrix::column_from(&v.embedded(t, s, 0, 0).vec_row_major()))
        .collect();
    let ws: Vec<ComplexMatrix> = g
        .rep2
        .iter()
        .map(|w| {
            ComplexMatrix::column_from(
                &w.embedded(t, s, split.t1_dim, split.s1_dim).vec_row_major(),
            )
        })
        .collect();
    let n = s * t;
    let mut m = ComplexMatrix::zeros(n, n);
    for x in &xs {
        m = &m + &(x * &x.adjoint());
    }
    for w in &ws {
        m = &m + &(w * &w.adjoint());
    }
    for (i, x) in xs.iter().enumerate() {
        for (j, w) in ws.iter().enumerate() {
            let cross = &x.scale(g.c.get(i, j)) * &w.adjoint();
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

/// Builds the SP gluing of `phi1` and `phi2` with gluing matrix `g`.
///
/// The matrix must refer to linearly independent Kraus representations of
/// the two channels; [`canonical_gluing_matrix`] produces one for the
/// canonical representations.
pub fn build_gluing(
    phi1: &KrausChannel,
    phi2: &KrausChannel,
    g: &GluingMatrix,
    split: &BlockSplit,
) -> Result<KrausChannel> {
    g.check_shape()?;
    if phi1.source_dim() != split.s1_dim
        || phi1.target_dim() != split.t1_dim
        || phi2.source_dim() != split.s2_dim
        || phi2.target_dim() != split.t2_dim
    {
        return Err(Error::InvalidInput(
            "channel dims do not match the split".into(),
        ));
    }
    let smax = g.c.spectral_norm();
    if smax > 1.0 + DEFAULT_TOL {
        return Err(Error::InvalidGluingMatrix { sigma_max: smax });
    }
    check_representation(phi1, &g.rep1, split.t1_dim, split.s1_dim)?;
    check_representation(phi2, &g.rep2, split.t2_dim, split.s2_dim)?;
    let choi = gluing_choi(g, split);
    KrausChannel::from_choi(&choi, 1e-8)
}

/// Wraps a bare C matrix with the canonical linearly independent
/// representations of the two channels. The caller's C must refer to
/// exactly these representations (`li_kraus` order).
pub fn canonical_gluing_matrix(
    phi1: &KrausChannel,
    phi2: &KrausChannel,
    c: ComplexMatrix,
) -> Result<GluingMatrix> {
    let rep1 = phi1.linearly_independent()?;
    let rep2 = phi2.linearly_independent()?;
    let g = GluingMatrix {
        c,
        rep1: rep1.kraus().to_vec(),
        rep2: rep2.kraus().to_vec(),
    };
    g.check_shape()?;
    Ok(g)
}

/// Recovers the gluing matrix of `phi` relative to the canonical
/// representations of `phi1` and `phi2`.
pub fn extract_gluing_matrix(
    phi: &KrausChannel,
    phi1: &KrausChannel,
    phi2: &KrausChannel,
    split: &BlockSplit,
) -> Result<GluingMatrix> {
    let rep1 = phi1.linearly_independent()?;
    let rep2 = phi2.linearly_independent()?;
    extract_gluing_matrix_with_reps(phi, rep1.kraus(), rep2.kraus(), split)
}

/// As [`extract_gluing_matrix`] but relative to caller-supplied linearly
/// independent representations of the two diagonal blocks.
pub fn extract_gluing_matrix_with_reps(
    phi: &KrausChannel,
    rep1: &[ComplexMatrix],
    rep2: &[ComplexMatrix],
    split: &BlockSplit,
) -> Result<GluingMatrix> {
    split.check_channel_dims(phi)?;
    let choi = phi.choi();
    let trace = choi.matrix.trace().re.max(1.0);
    let residual = sp_residual_of_choi(&choi, split);
    if residual > DEFAULT_TOL * trace {
        return Err(Error::NotSubspacePreserving { residual });
    }
    let (block1, block2) = crate::subspace::sp_blocks(phi, split)?;
    let phi1 = KrausChannel::new(split.s1_dim, split.t1_dim, rep1.to_vec())?;
    let phi2 = KrausChannel::new(split.s2_dim, split.t2_dim, rep2.to_vec())?;
    if block1.distance(&phi1)? > 1e-8 * trace || block2.distance(&phi2)? > 1e-8 * trace {
        return Err(Error::NotAGluingOfThese);
    }
    check_representation(&block1, rep1, split.t1_dim, split.s1_dim)?;
    check_representation(&block2, rep2, split.t2_dim, split.s2_dim)?;

    // Cross block of the Choi matrix in the (t1,s1) x (t2,s2) support,
    // solved as least squares in the outer-product basis of the two reps.
    let vi = split.v_support();
    let wi = split.w_support();
    let cross = ComplexMatrix::from_fn(vi.len(), wi.len(), |r, c| {
        choi.matrix.get(vi[r], wi[c])
    });
    let xs: Vec<Vec<Complex64>> = rep1.iter().map(|v| v.vec_row_major()).collect();
    let ys: Vec<Vec<Complex64>> = rep2.iter().map(|w| w.vec_row_major()).collect();
    let n = rep1.len();
    let m = rep2.len();
    // vec(cross) = B * vec(C) with B[(p,q),(n,m)] = x_n[p] * conj(y_m[q]).
    let rows = vi.len() * wi.len();
    let basis = ComplexMatrix::from_fn(rows, n * m, |r, col| {
        let (p, q) = (r / wi.len(), r % wi.len());
        let (ni, mi) = (col / m, col % m);
        xs[ni][p] * ys[mi][q].conj()
    });
    let rhs = ComplexMatrix::from_fn(rows, 1, |r, _| cross.get(r / wi.len(), r % wi.len()));
    let sol = &numerics::pseudoinverse(&basis, DEFAULT_TOL)? * &rhs;
    let c = ComplexMatrix::from_fn(n, m, |ni, mi| sol.get(ni * m + mi, 0));
    let fit_residual = (&(&basis * &sol) - &rhs).frobenius_norm();
    if fit_residual > 1e-9 * trace {
        return Err(Error::NotInGluingFamily {
            residual: fit_residual,
        });
    }
    Ok(GluingMatrix {
        c,
        rep1: rep1.to_vec(),
        rep2: rep2.to_vec(),
    })
}

/// Convex decomposition of a valid gluing matrix into extreme points
/// (matrices with `D D^dag = I` on the smaller side).
///
/// Construction: SVD `C = sum_k r_k c_k d_k^dag` with
/// ascending `r`, gaps `lambda`, sign-flip matrices `D^(n)`, midpoints
/// `H^(n) = (D^(0) + D^(n)) / 2`, expanded into pure extreme points.
pub fn extreme_decompose(g: &GluingMatrix) -> Result<Vec<(f64, ComplexMatrix)>> {
    let smax = g.c.spectral_norm();
    if smax > 1.0 + DEFAULT_TOL {
        return Err(Error::InvalidGluingMatrix { sigma_max: smax });
    }
    let transposed = g.c.rows() > g.c.cols();
    let c = if transposed { g.c.adjoint() } else { g.c.clone() };
    let n = c.rows();
    let dec = numerics::svd(&c)?;

    // Ascending singular values with their vector pairs.
    let mut triplets: Vec<(f64, ComplexMatrix, ComplexMatrix)> = (0..n)
        .map(|i| {
            (
                dec.singulars[i].min(1.0),
                dec.left.block(0, i, n, 1),
                dec.right_adj.block(i, 0, 1, c.cols()),
            )
        })
        .collect();
    triplets.reverse();

    let d_matrix = |flips: usize| -> ComplexMatrix {
        let mut d = ComplexMatrix::zeros(n, c.cols());
        for (k, (_, ck, dk)) in triplets.iter().enumerate() {
            let sign = if k < flips { -1.0 } else { 1.0 };
            d = &d + &(&ck.scale(Complex64::new(sign, 0.0)) * dk);
        }
        d
    };

    let mut lambdas = Vec::with_capacity(n + 1);
    lambdas.push(triplets[0].0);
    for k in 1..n {
        lambdas.push(triplets[k].0 - triplets[k - 1].0);
    }
    lambdas.push(1.0 - triplets[n - 1].0);

    let mut out = Vec::new();
    let tail: f64 = lambdas[1..].iter().sum();
    let w0 = lambdas[0] + 0.5 * tail;
    if w0 > 1e-12 {
        out.push((w0, d_matrix(0)));
    }
    for (fk, &lam) in lambdas.iter().enumerate().skip(1) {
        if 0.5 * lam > 1e-12 {
            out.push((0.5 * lam, d_matrix(fk)));
        }
    }
    if transposed {
        for (_, d) in out.iter_mut() {
            *d = d.adjoint();
        }
    }
    Ok(out)
}

/// Builds the LSP gluing of two channels from the coefficient vectors.
pub fn build_lsp(
    phi1: &KrausChannel,
    phi2: &KrausChannel,
    v: &LspVectors,
    split: &BlockSplit,
) -> Result<KrausChannel> {
    let rep1 = phi1.linearly_independent()?;
    let rep2 = phi2.linearly_independent()?;
    build_lsp_with_reps(rep1.kraus(), rep2.kraus(), v, split)
}

/// As [`build_lsp`] but on caller-supplied linearly independent
/// representations (the coefficient vectors refer to these).
pub fn build_lsp_with_reps(
    rep1: &[ComplexMatrix],
    rep2: &[ComplexMatrix],
    v: &LspVectors,
    split: &BlockSplit,
) -> Result<KrausChannel> {
    let (n1, n2) = v.norms();
    if n1 > 1.0 + DEFAULT_TOL || n2 > 1.0 + DEFAULT_TOL {
        return Err(Error::InvalidLspVectors(format!(
            "coefficient norms ({n1:.6}, {n2:.6}) exceed 1"
        )));
    }
    if v.c1.len() != rep1.len() || v.c2.len() != rep2.len() {
        return Err(Error::InvalidLspVectors(
            "coefficient lengths do not match the representations".into(),
        ));
    }
    let phi1 = KrausChannel::new(split.s1_dim, split.t1_dim, rep1.to_vec())?;
    let phi2 = KrausChannel::new(split.s2_dim, split.t2_dim, rep2.to_vec())?;
    let tp1 = phi1.classify();
    let tp2 = phi2.classify();
    if !tp1.is_tp || !tp2.is_tp {
        return Err(Error::InvalidInput(
            "LSP gluings are defined for trace preserving channels".into(),
        ));
    }
    let g = GluingMatrix {
        c: v.induced_matrix(),
        rep1: rep1.to_vec(),
        rep2: rep2.to_vec(),
    };
    build_gluing(&phi1, &phi2, &g, split)
}

/// Balanced rank-one factorization `C = c1 c2^dag` with
/// `||c1|| = ||c2|| = sqrt(sigma_1)` and the first nonzero entry of `c1`
/// real positive.
pub fn lsp_factor(g: &GluingMatrix, tol: f64) -> Result<LspVectors> {
    let dec = numerics::svd(&g.c)?;
    let nonzero = dec.singulars.iter().filter(|&&s| s > tol).count();
    if nonzero == 0 {
        return Err(Error::ZeroMatrix);
    }
    if nonzero > 1 {
        return Err(Error::NotLsp);
    }
    let sigma = dec.singulars[0];
    let root = sigma.sqrt();
    let mut c1: Vec<Complex64> = (0..g.c.rows())
        .map(|i| dec.left.get(i, 0) * root)
        .collect();
    let mut c2: Vec<Complex64> = (0..g.c.cols())
        .map(|j| dec.right_adj.get(0, j).conj() * root)
        .collect();
    if let Some(first) = c1.iter().find(|z| z.norm() > tol) {
        let phase = (first / first.norm()).conj();
        for z in c1.iter_mut() {
            *z *= phase;
        }
        for z in c2.iter_mut() {
            *z *= phase;
        }
    }
    Ok(LspVectors { c1, c2 })
}
