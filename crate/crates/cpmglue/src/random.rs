//! Random generators for matrices, unitaries and channels. Used by the
//! property suites and the demo sweeps; all functions are deterministic
//! given the RNG state.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::KrausChannel;
use crate::matrix::ComplexMatrix;

/// Standard-normal complex entries.
pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(normal(rng), normal(rng))
    })
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; avoids pulling in rand_distr for one distribution.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-like random unitary via QR of a Gaussian matrix.
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    isometry(rng, dim, dim)
}

/// Random isometry: `rows x cols` with orthonormal columns (`rows >= cols`).
pub fn isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = matrix(rng, rows, cols);
    let qr = g.as_na().clone().qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the column phases so Q is independent of the sign conventions of
    // the factorization.
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            (d / d.norm()).conj()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

/// Random normalized state vector.
pub fn state<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let g = matrix(rng, dim, 1);
    let norm = g.frobenius_norm();
    g.entries_row_major().iter().map(|z| z / norm).collect()
}

/// Random density matrix of full rank.
pub fn density<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    density_of_rank(rng, dim, dim)
}

/// Random density matrix with the given rank.
pub fn density_of_rank<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    assert!(rank >= 1 && rank <= dim);
    let g = matrix(rng, dim, rank);
    let gram = &g * &g.adjoint();
    gram.scale(Complex64::new(1.0 / gram.trace().re, 0.0))
}

/// Random trace preserving channel with `kraus_count` Kraus operators,
/// drawn from a Stinespring isometry. The count is raised when needed so
/// `target_dim * kraus_count >= source_dim`.
pub fn tp_channel<R: Rng>(
    rng: &mut R,
    source_dim: usize,
    target_dim: usize,
    kraus_count: usize,
) -> KrausChannel {
    let kraus_count = kraus_count.max(source_dim.div_ceil(target_dim));
    let w = isometry(rng, target_dim * kraus_count, source_dim);
    let kraus = (0..kraus_count)
        .map(|j| w.block(j * target_dim, 0, target_dim, source_dim))
        .collect();
    KrausChannel::new(source_dim, target_dim, kraus).expect("valid dims")
}

/// Random `n x m` matrix rescaled so its largest singular value is at
/// most `scale` (and generically equal to it).
pub fn contraction<R: Rng>(rng: &mut R, n: usize, m: usize, scale: f64) -> ComplexMatrix {
    let g = matrix(rng, n, m);
    let smax = g.spectral_norm();
    if smax <= 0.0 {
        return g;
    }
    g.scale(Complex64::new(scale / smax, 0.0))
}
