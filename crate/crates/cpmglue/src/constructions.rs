//! Concrete gluing families and structural builders: unitary families,
//! collapse gluings, the swap mixture, ancilla attachment and partial
//! trace, the two SP-from-LSP reconstructions, vacuum extension of a
//! device, and a coherence metric for superposition probes.
//!
//! Tensor products order factors as system (x) ancilla throughout.

use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::gluing::{self, GluingMatrix, LspVectors};
use crate::matrix::ComplexMatrix;
use crate::numerics::{self, DEFAULT_TOL};
use crate::subspace::{self, BlockSplit};

/// A channel together with the vacuum-coupling operator coefficients: the
/// complete description of one evolution device acting on superpositions
/// of a single particle and the vacuum.
#[derive(Debug, Clone)]
pub struct DevicePair {
    channel: KrausChannel,
    v_coeffs: Vec<Complex64>,
}

impl DevicePair {
    /// Couples a trace preserving channel (equal source and target) with
    /// coefficients over its canonical linearly independent Kraus
    /// representation, `sum |c_k|^2 <= 1`.
    pub fn new(channel: KrausChannel, v_coeffs: Vec<Complex64>) -> Result<Self> {
        if channel.source_dim() != channel.target_dim() {
            return Err(Error::InvalidInput(
                "device channel must have equal source and target".into(),
            ));
        }
        let report = channel.classify();
        if !report.is_tp {
            return Err(Error::InvalidInput("device channel must be TP".into()));
        }
        if v_coeffs.len() != report.kraus_number {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                report.kraus_number,
                v_coeffs.len()
            )));
        }
        let norm_sq: f64 = v_coeffs.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 1.0 + DEFAULT_TOL {
            return Err(Error::InvalidInput(format!(
                "coefficient norm squared {norm_sq:.6} exceeds 1"
            )));
        }
        Ok(Self { channel, v_coeffs })
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    pub fn v_coeffs(&self) -> &[Complex64] {
        &self.v_coeffs
    }

    /// The induced vacuum-coupling operator `V = sum c_k V_k`.
    pub fn coupling_operator(&self) -> Result<ComplexMatrix> {
        let li = self.channel.linearly_independent()?;
        let d = self.channel.source_dim();
        let mut v = ComplexMatrix::zeros(d, d);
        for (c, vk) in self.v_coeffs.iter().zip(li.kraus()) {
            v = &v + &vk.scale(*c);
        }
        Ok(v)
    }
}

/// A superposed pure input `alpha |psi1> + beta |psi2>` across the two
/// source blocks.
#[derive(Debug, Clone)]
pub struct SuperpositionProbe {
    psi1: Vec<Complex64>,
    psi2: Vec<Complex64>,
    alpha: Complex64,
    beta: Complex64,
}

impl SuperpositionProbe {
    pub fn new(
        psi1: Vec<Complex64>,
        psi2: Vec<Complex64>,
        alpha: Complex64,
        beta: Complex64,
    ) -> Result<Self> {
        let n1: f64 = psi1.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = psi2.iter().map(|z| z.norm_sqr()).sum();
        let amp = alpha.norm_sqr() + beta.norm_sqr();
        if (n1 - 1.0).abs() > 1e-10 || (n2 - 1.0).abs() > 1e-10 || (amp - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput("probe is not normalized".into()));
        }
        Ok(Self {
            psi1,
            psi2,
            alpha,
            beta,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// The probe as a full source-space column vector.
    pub fn ket(&self, split: &BlockSplit) -> Result<ComplexMatrix> {
        if self.psi1.len() != split.s1_dim || self.psi2.len() != split.s2_dim {
            return Err(Error::InvalidInput(
                "probe dims do not match the split".into(),
            ));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); split.source_dim()];
        for (i, z) in self.psi1.iter().enumerate() {
            v[i] = self.alpha * z;
        }
        for (i, z) in self.psi2.iter().enumerate() {
            v[split.s1_dim + i] = self.beta * z;
        }
        Ok(ComplexMatrix::column_from(&v))
    }
}

fn check_unitary(u: &ComplexMatrix, what: &str) -> Result<()> {
    if !u.is_unitary(1e-9) {
        return Err(Error::InvalidInput(format!("{what} is not unitary")));
    }
    Ok(())
}

/// The one-parameter family of gluings of two unitary channels with
/// gluing scalar `c = r e^{i theta}`: `r = 1` is the coherent unitary
/// direct sum, `r = 0` the fully decohering direct sum.
pub fn unitary_gluing(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    r: f64,
    theta: f64,
) -> Result<KrausChannel> {
    check_unitary(u1, "u1")?;
    check_unitary(u2, "u2")?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("r = {r} is outside [0, 1]")));
    }
    let split = BlockSplit::symmetric(u1.rows(), u2.rows())?;
    let c = Complex64::from_polar(r, theta);
    let g = GluingMatrix {
        c: ComplexMatrix::from_rows_vec(1, 1, vec![c])?,
        rep1: vec![u1.clone()],
        rep2: vec![u2.clone()],
    };
    let phi1 = KrausChannel::unitary(u1.clone())?;
    let phi2 = KrausChannel::unitary(u2.clone())?;
    gluing::build_gluing(&phi1, &phi2, &g, &split)
}

/// Cross-block coupling of a collapse gluing.
#[derive(Debug, Clone)]
pub enum CollapseCoupling {
    /// Full gluing matrix over the coordinate-basis representations.
    Matrix(ComplexMatrix),
    /// Rank-one coefficients, giving the LSP subfamily.
    Vectors(LspVectors),
    /// `C_kl = delta_kl`; requires equal block dims.
    Delta,
}

/// Gluings of the two collapse channels that send every state of block
/// `i` to the fixed pure state `psi_i`. The coefficient matrix refers to
/// the representations `{|psi_i><k|}_k` in coordinate order.
pub fn collapse_gluing(
    psi1: &[Complex64],
    psi2: &[Complex64],
    coupling: &CollapseCoupling,
) -> Result<KrausChannel> {
    let d1 = psi1.len();
    let d2 = psi2.len();
    let unit = |v: &[Complex64]| (v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-10;
    if !unit(psi1) || !unit(psi2) {
        return Err(Error::InvalidInput("collapse targets must be unit vectors".into()));
    }
    let rep = |psi: &[Complex64]| -> Vec<ComplexMatrix> {
        (0..psi.len())
            .map(|k| ComplexMatrix::from_fn(psi.len(), psi.len(), |r, c| {
                if c == k {
                    psi[r]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
            .collect()
    };
    let rep1 = rep(psi1);
    let rep2 = rep(psi2);
    let c = match coupling {
        CollapseCoupling::Matrix(m) => {
            if m.rows() != d1 || m.cols() != d2 {
                return Err(Error::InvalidInput(format!(
                    "coupling matrix must be {d1}x{d2}"
                )));
            }
            m.clone()
        }
        CollapseCoupling::Vectors(v) => {
            if v.c1.len() != d1 || v.c2.len() != d2 {
                return Err(Error::InvalidLspVectors(
                    "coefficient lengths do not match the block dims".into(),
                ));
            }
            v.induced_matrix()
        }
        CollapseCoupling::Delta => {
            if d1 != d2 {
                return Err(Error::InvalidInput(
                    "delta coupling needs equal block dims".into(),
                ));
            }
            ComplexMatrix::identity(d1)
        }
    };
    let split = BlockSplit::symmetric(d1, d2)?;
    let phi1 = KrausChannel::new(d1, d1, rep1.clone())?;
    let phi2 = KrausChannel::new(d2, d2, rep2.clone())?;
    let g = GluingMatrix { c, rep1, rep2 };
    gluing::build_gluing(&phi1, &phi2, &g, &split)
}

/// The equal mixture of the two one-sided unitary channels
/// `U_a = V_s1 + P_s2` and `U_b = P_s1 + V_s2`: an SP gluing that is
/// never LSP.
pub fn swap_mixture(v_s1: &ComplexMatrix, v_s2: &ComplexMatrix) -> Result<KrausChannel> {
    check_unitary(v_s1, "v_s1")?;
    check_unitary(v_s2, "v_s2")?;
    let indep = |v: &ComplexMatrix| -> Result<()> {
        let d = v.rows();
        let eye = ComplexMatrix::identity(d);
        let stacked = ComplexMatrix::from_fn(d * d, 2, |r, c| {
            let m = if c == 0 { v } else { &eye };
            m.vec_row_major()[r]
        });
        let s = numerics::svd(&stacked)?.singulars;
        if *s.last().unwrap() <= 1e-9 {
            return Err(Error::InvalidInput(
                "block unitary is not linearly independent from the identity".into(),
            ));
        }
        Ok(())
    };
    indep(v_s1)?;
    indep(v_s2)?;
    let half = Complex64::new(0.5f64.sqrt(), 0.0);
    let rep = |v: &ComplexMatrix| vec![v.scale(half), ComplexMatrix::identity(v.rows()).scale(half)];
    let rep1 = rep(v_s1);
    let rep2 = rep(v_s2);
    let split = BlockSplit::symmetric(v_s1.rows(), v_s2.rows())?;
    let phi1 = KrausChannel::new(v_s1.rows(), v_s1.rows(), rep1.clone())?;
    let phi2 = KrausChannel::new(v_s2.rows(), v_s2.rows(), rep2.clone())?;
    let mut c = ComplexMatrix::zeros(2, 2);
    c.set(0, 1, Complex64::new(1.0, 0.0));
    c.set(1, 0, Complex64::new(1.0, 0.0));
    let g = GluingMatrix { c, rep1, rep2 };
    gluing::build_gluing(&phi1, &phi2, &g, &split)
}

/// The channel `Q -> Q (x) sigma` from the split source space to the
/// tensor-extended space; SP on the extended split, LSP iff `sigma` is
/// pure.
pub fn attach_ancilla(sigma: &ComplexMatrix, split: &BlockSplit) -> Result<KrausChannel> {
    if !sigma.is_square() || (sigma.trace().re - 1.0).abs() > 1e-10 || sigma.trace().im.abs() > 1e-10
    {
        return Err(Error::InvalidInput("sigma must be a density matrix".into()));
    }
    let eig = numerics::hermitian_eigen(sigma)?;
    if eig.values.iter().any(|&v| v < -1e-10) {
        return Err(Error::InvalidInput("sigma must be a density matrix".into()));
    }
    let s = split.source_dim();
    let da = sigma.rows();
    let mut kraus = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= 1e-12 {
            continue;
        }
        let col = ComplexMatrix::from_fn(da, 1, |r, _| eig.vectors.get(r, k));
        kraus.push(ComplexMatrix::identity(s).kron(&col).scale(Complex64::new(lam.sqrt(), 0.0)));
    }
    KrausChannel::new(s, s * da, kraus)
}

/// The split a tensor-extended channel lives on: each block dimension is
/// multiplied by the ancilla dimension.
pub fn tensor_split(split: &BlockSplit, ancilla_dim: usize) -> Result<BlockSplit> {
    BlockSplit::new(
        split.s1_dim * ancilla_dim,
        split.s2_dim * ancilla_dim,
        split.t1_dim * ancilla_dim,
        split.t2_dim * ancilla_dim,
    )
}

/// Partial trace over a final ancilla factor, as a channel from
/// `(s1 (+) s2) (x) a` onto `s1 (+) s2`; LSP iff the ancilla is trivial.
pub fn partial_trace_channel(split: &BlockSplit, ancilla_dim: usize) -> Result<KrausChannel> {
    if ancilla_dim == 0 {
        return Err(Error::InvalidInput("ancilla_dim must be >= 1".into()));
    }
    let s = split.source_dim();
    let kraus = (0..ancilla_dim)
        .map(|k| {
            let bra = ComplexMatrix::from_fn(1, ancilla_dim, |_, c| {
                if c == k {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            ComplexMatrix::identity(s).kron(&bra)
        })
        .collect();
    KrausChannel::new(s * ancilla_dim, s, kraus)
}

fn require_sp_tp(phi: &KrausChannel, split: &BlockSplit) -> Result<KrausChannel> {
    let residual = subspace::sp_residual(phi, split)?;
    if residual > DEFAULT_TOL * phi.choi().matrix.trace().re.max(1.0) {
        return Err(Error::NotSubspacePreserving { residual });
    }
    if !phi.classify().is_tp {
        return Err(Error::InvalidInput("channel must be trace preserving".into()));
    }
    phi.linearly_independent()
}

/// Column of the k-th ancilla basis vector.
fn basis_col(dim: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, 1, |r, _| {
        if r == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Rewrites an SP TP channel as a partial trace of a single-Kraus LSP
/// channel into a tensor-extended target: returns the ancilla dimension
/// and the extended channel `Psi` with `Tr_a . Psi = phi`.
pub fn sprep1(phi: &KrausChannel, split: &BlockSplit) -> Result<(usize, KrausChannel)> {
    let li = require_sp_tp(phi, split)?;
    let k = li.kraus().len();
    let s = split.source_dim();
    let t = split.target_dim();
    let mut w = ComplexMatrix::zeros(t * k, s);
    for (idx, vk) in li.kraus().iter().enumerate() {
        w = &w + &vk.kron(&basis_col(k, idx));
    }
    let psi = KrausChannel::new(s, t * k, vec![w])?;
    Ok((k, psi))
}

/// Rewrites an SP TP channel as `Tr_a . Psi' . (Q (x) |a><a|)` with
/// `Psi'` an LSP gluing on the tensor-extended split. The coordinates of
/// `a` must be given over an ancilla of dimension `K(phi)`.
pub fn sprep2(phi: &KrausChannel, split: &BlockSplit, a: &[Complex64]) -> Result<KrausChannel> {
    let li = require_sp_tp(phi, split)?;
    let k = li.kraus().len();
    if a.len() != k {
        return Err(Error::InvalidInput(format!(
            "ancilla state must have dimension {k}"
        )));
    }
    if (a.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("ancilla state must be normalized".into()));
    }
    // V_i = sum_k V_{i,k} (x) |a_k>, compressed to block i.
    let lifted = |t_dim: usize, s_dim: usize, r0: usize, c0: usize| -> ComplexMatrix {
        let mut x = ComplexMatrix::zeros(t_dim * k, s_dim);
        for (idx, vk) in li.kraus().iter().enumerate() {
            x = &x + &vk.block(r0, c0, t_dim, s_dim).kron(&basis_col(k, idx));
        }
        x
    };
    let x1 = lifted(split.t1_dim, split.s1_dim, 0, 0);
    let x2 = lifted(split.t2_dim, split.s2_dim, split.t1_dim, split.s1_dim);
    let rep = |x: &ComplexMatrix, s_dim: usize| -> Vec<ComplexMatrix> {
        (0..k)
            .map(|l| {
                let bra = ComplexMatrix::from_fn(1, k, |_, c| {
                    if c == l {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let _ = s_dim;
                x.kron(&bra)
            })
            .collect()
    };
    let rep1 = rep(&x1, split.s1_dim);
    let rep2 = rep(&x2, split.s2_dim);
    let coeffs: Vec<Complex64> = a.iter().map(|z| z.conj()).collect();
    let v = LspVectors {
        c1: coeffs.clone(),
        c2: coeffs,
    };
    gluing::build_lsp_with_reps(&rep1, &rep2, &v, &tensor_split(split, k)?)
}

/// Extends a device to its vacuum-augmented space: the gluing of the
/// device channel with the one-dimensional identity on the vacuum,
/// coupled through the device coefficients.
pub fn vacuum_extend(pair: &DevicePair) -> Result<KrausChannel> {
    let d = pair.channel.source_dim();
    let split = BlockSplit::new(d, 1, d, 1)?;
    let vacuum = KrausChannel::identity(1);
    let c = ComplexMatrix::from_fn(pair.v_coeffs.len(), 1, |r, _| pair.v_coeffs[r]);
    let g = gluing::canonical_gluing_matrix(&pair.channel, &vacuum, c)?;
    gluing::build_gluing(&pair.channel, &vacuum, &g, &split)
}

/// The LSP gluing uniquely determined by two devices: coefficient
/// vectors are the two vacuum couplings.
pub fn pair_to_lsp(p1: &DevicePair, p2: &DevicePair, split: &BlockSplit) -> Result<KrausChannel> {
    let v = LspVectors {
        c1: p1.v_coeffs.clone(),
        c2: p2.v_coeffs.clone(),
    };
    gluing::build_lsp(&p1.channel, &p2.channel, &v, split)
}

/// Cross-block trace norm of the channel output on the probe, normalized
/// by the input's cross-block trace norm `|alpha| |beta|`: 1 when the
/// superposition survives intact, 0 when it fully decoheres.
pub fn coherence_metric(
    phi: &KrausChannel,
    split: &BlockSplit,
    probe: &SuperpositionProbe,
) -> Result<f64> {
    let weight = probe.alpha.norm() * probe.beta.norm();
    if weight < 1e-12 {
        return Err(Error::UndefinedProbe);
    }
    let ket = probe.ket(split)?;
    let rho = &ket * &ket.adjoint();
    let out = phi.apply(&rho)?;
    let cross = out.block(0, split.t1_dim, split.t1_dim, split.t2_dim);
    Ok(cross.trace_norm() / weight)
}
