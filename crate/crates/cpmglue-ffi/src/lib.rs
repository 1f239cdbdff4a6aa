//! C ABI for the cpmglue library.
//!
//! Channels are held behind opaque handles; every function returns a
//! status code and writes results through out-pointers. Complex matrices
//! cross the boundary as row-major interleaved doubles `[re, im]`.

use std::panic::{catch_unwind, AssertUnwindSafe};

use cpmglue::channel::KrausChannel;
use cpmglue::gluing::{self, GluingMatrix};
use cpmglue::matrix::ComplexMatrix;
use cpmglue::subspace::{self, BlockSplit};
use cpmglue::Error;
use num_complex::Complex64;

/// Opaque channel handle.
pub struct CpmChannel {
    inner: KrausChannel,
}

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpmStatus {
    Ok = 0,
    /// A pointer argument was null.
    NullPointer = 1,
    /// Malformed dimensions, non-finite entries or other invalid input.
    InvalidInput = 2,
    NotCompletelyPositive = 3,
    NotSubspacePreserving = 4,
    InvalidGluingMatrix = 5,
    NotARepresentation = 6,
    NotAGluingOfThese = 7,
    NotInGluingFamily = 8,
    NotLsp = 9,
    /// Any other mathematical verdict failure.
    MathError = 10,
    /// An unexpected internal failure.
    InternalError = 11,
}

fn status_of(err: &Error) -> CpmStatus {
    match err {
        Error::InvalidInput(_) => CpmStatus::InvalidInput,
        Error::NotCompletelyPositive { .. } => CpmStatus::NotCompletelyPositive,
        Error::NotSubspacePreserving { .. } => CpmStatus::NotSubspacePreserving,
        Error::InvalidGluingMatrix { .. } => CpmStatus::InvalidGluingMatrix,
        Error::NotARepresentation => CpmStatus::NotARepresentation,
        Error::NotAGluingOfThese => CpmStatus::NotAGluingOfThese,
        Error::NotInGluingFamily { .. } => CpmStatus::NotInGluingFamily,
        Error::NotLsp => CpmStatus::NotLsp,
        _ => CpmStatus::MathError,
    }
}

/// Orthogonal split of source and target spaces into two blocks.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpmSplit {
    pub s1_dim: usize,
    pub s2_dim: usize,
    pub t1_dim: usize,
    pub t2_dim: usize,
}

impl CpmSplit {
    fn to_split(self) -> Result<BlockSplit, Error> {
        BlockSplit::new(self.s1_dim, self.s2_dim, self.t1_dim, self.t2_dim)
    }
}

/// CP/TP classification report of a channel.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpmClassification {
    pub is_cp: bool,
    pub is_tp: bool,
    pub kraus_number: usize,
    pub tp_residual: f64,
    pub min_choi_eigenvalue: f64,
}

fn guarded(f: impl FnOnce() -> CpmStatus) -> CpmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => CpmStatus::InternalError,
    }
}

unsafe fn read_matrix(data: *const f64, rows: usize, cols: usize) -> Option<ComplexMatrix> {
    if data.is_null() || rows == 0 || cols == 0 {
        return None;
    }
    let slice = std::slice::from_raw_parts(data, rows * cols * 2);
    let flat: Vec<Complex64> = slice
        .chunks_exact(2)
        .map(|re_im| Complex64::new(re_im[0], re_im[1]))
        .collect();
    ComplexMatrix::from_rows_vec(rows, cols, flat).ok()
}

unsafe fn write_matrix(m: &ComplexMatrix, out: *mut f64) {
    let slice = std::slice::from_raw_parts_mut(out, m.rows() * m.cols() * 2);
    for (i, z) in m.entries_row_major().iter().enumerate() {
        slice[2 * i] = z.re;
        slice[2 * i + 1] = z.im;
    }
}

fn boxed(channel: KrausChannel, out: *mut *mut CpmChannel) -> CpmStatus {
    unsafe {
        *out = Box::into_raw(Box::new(CpmChannel { inner: channel }));
    }
    CpmStatus::Ok
}

/// Creates a channel from `kraus_count` stacked `target_dim x source_dim`
/// operators. `data` holds `kraus_count * target_dim * source_dim`
/// row-major complex entries as interleaved doubles.
///
/// # Safety
/// `data` must point to `kraus_count * target_dim * source_dim * 2`
/// doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_new(
    source_dim: usize,
    target_dim: usize,
    kraus_count: usize,
    data: *const f64,
    out: *mut *mut CpmChannel,
) -> CpmStatus {
    guarded(|| {
        if out.is_null() || data.is_null() {
            return CpmStatus::NullPointer;
        }
        if kraus_count == 0 || source_dim == 0 || target_dim == 0 {
            return CpmStatus::InvalidInput;
        }
        let per_op = target_dim * source_dim * 2;
        let mut ops = Vec::with_capacity(kraus_count);
        for k in 0..kraus_count {
            match read_matrix(data.add(k * per_op), target_dim, source_dim) {
                Some(m) => ops.push(m),
                None => return CpmStatus::InvalidInput,
            }
        }
        match KrausChannel::new(source_dim, target_dim, ops) {
            Ok(c) => boxed(c, out),
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a channel handle. Null is ignored.
///
/// # Safety
/// `channel` must be null or a pointer returned by this library that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_free(channel: *mut CpmChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Source dimension; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_source_dim(channel: *const CpmChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.source_dim())
}

/// Target dimension; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_target_dim(channel: *const CpmChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.target_dim())
}

/// Number of stored Kraus operators; 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_kraus_count(channel: *const CpmChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.kraus().len())
}

/// Copies Kraus operator `index` into `out`
/// (`target_dim * source_dim * 2` doubles, row-major interleaved).
///
/// # Safety
/// `channel` must be a live handle and `out` sized as documented.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_kraus(
    channel: *const CpmChannel,
    index: usize,
    out: *mut f64,
) -> CpmStatus {
    guarded(|| {
        let Some(c) = channel.as_ref() else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        let Some(op) = c.inner.kraus().get(index) else {
            return CpmStatus::InvalidInput;
        };
        write_matrix(op, out);
        CpmStatus::Ok
    })
}

/// Classifies the channel (CP, TP, Kraus number, residuals).
///
/// # Safety
/// `channel` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_classify(
    channel: *const CpmChannel,
    out: *mut CpmClassification,
) -> CpmStatus {
    guarded(|| {
        let Some(c) = channel.as_ref() else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        let report = c.inner.classify();
        *out = CpmClassification {
            is_cp: report.is_cp,
            is_tp: report.is_tp,
            kraus_number: report.kraus_number,
            tp_residual: report.tp_residual,
            min_choi_eigenvalue: report.min_choi_eigenvalue,
        };
        CpmStatus::Ok
    })
}

/// Applies the channel to a `source_dim x source_dim` operator and writes
/// the `target_dim x target_dim` output.
///
/// # Safety
/// `state` must hold `source_dim^2 * 2` doubles and `out`
/// `target_dim^2 * 2` doubles.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_apply(
    channel: *const CpmChannel,
    state: *const f64,
    out: *mut f64,
) -> CpmStatus {
    guarded(|| {
        let Some(c) = channel.as_ref() else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        let d = c.inner.source_dim();
        let Some(q) = read_matrix(state, d, d) else {
            return CpmStatus::InvalidInput;
        };
        match c.inner.apply(&q) {
            Ok(m) => {
                write_matrix(&m, out);
                CpmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Trace-norm-based distance between the Choi matrices of two channels.
///
/// # Safety
/// Both handles must be live; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_distance(
    a: *const CpmChannel,
    b: *const CpmChannel,
    out: *mut f64,
) -> CpmStatus {
    guarded(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        match a.inner.distance(&b.inner) {
            Ok(d) => {
                *out = d;
                CpmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Whether the channel preserves the two subspaces of `split` at
/// tolerance `tol`.
///
/// # Safety
/// `channel` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_is_sp(
    channel: *const CpmChannel,
    split: CpmSplit,
    tol: f64,
    out: *mut bool,
) -> CpmStatus {
    guarded(|| {
        let Some(c) = channel.as_ref() else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        let split = match split.to_split() {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        match subspace::is_sp(&c.inner, &split, tol) {
            Ok(b) => {
                *out = b;
                CpmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Returns the same map with a linearly independent Kraus representation
/// as a new handle.
///
/// # Safety
/// `channel` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_channel_li_kraus(
    channel: *const CpmChannel,
    out: *mut *mut CpmChannel,
) -> CpmStatus {
    guarded(|| {
        let Some(c) = channel.as_ref() else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        match c.inner.linearly_independent() {
            Ok(li) => boxed(li, out),
            Err(e) => status_of(&e),
        }
    })
}

/// Builds the gluing of `phi1` and `phi2` from the `rows x cols`
/// coefficient matrix `c`, taken relative to the canonical linearly
/// independent representations of the two channels.
///
/// # Safety
/// The handles must be live; `c` must hold `rows * cols * 2` doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_build_gluing(
    phi1: *const CpmChannel,
    phi2: *const CpmChannel,
    c: *const f64,
    rows: usize,
    cols: usize,
    split: CpmSplit,
    out: *mut *mut CpmChannel,
) -> CpmStatus {
    guarded(|| {
        let (Some(p1), Some(p2)) = (phi1.as_ref(), phi2.as_ref()) else {
            return CpmStatus::NullPointer;
        };
        if out.is_null() {
            return CpmStatus::NullPointer;
        }
        let Some(cmat) = read_matrix(c, rows, cols) else {
            return CpmStatus::InvalidInput;
        };
        let split = match split.to_split() {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        let g = match gluing::canonical_gluing_matrix(&p1.inner, &p2.inner, cmat) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        match gluing::build_gluing(&p1.inner, &p2.inner, &g, &split) {
            Ok(glued) => boxed(glued, out),
            Err(e) => status_of(&e),
        }
    })
}

/// Recovers the gluing matrix of `phi` relative to the canonical
/// representations of `phi1` and `phi2`. `c_out` must hold
/// `c_capacity` doubles; on success `rows_out x cols_out` complex
/// entries (`rows_out * cols_out * 2` doubles) are written.
///
/// # Safety
/// The handles must be live; `c_out` must hold `c_capacity` doubles;
/// `rows_out` and `cols_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cpm_extract_gluing(
    phi: *const CpmChannel,
    phi1: *const CpmChannel,
    phi2: *const CpmChannel,
    split: CpmSplit,
    c_out: *mut f64,
    c_capacity: usize,
    rows_out: *mut usize,
    cols_out: *mut usize,
) -> CpmStatus {
    guarded(|| {
        let (Some(p), Some(p1), Some(p2)) = (phi.as_ref(), phi1.as_ref(), phi2.as_ref()) else {
            return CpmStatus::NullPointer;
        };
        if c_out.is_null() || rows_out.is_null() || cols_out.is_null() {
            return CpmStatus::NullPointer;
        }
        let split = match split.to_split() {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        let g: GluingMatrix =
            match gluing::extract_gluing_matrix(&p.inner, &p1.inner, &p2.inner, &split) {
                Ok(g) => g,
                Err(e) => return status_of(&e),
            };
        let needed = g.c.rows() * g.c.cols() * 2;
        if c_capacity < needed {
            return CpmStatus::InvalidInput;
        }
        *rows_out = g.c.rows();
        *cols_out = g.c.cols();
        write_matrix(&g.c, c_out);
        CpmStatus::Ok
    })
}
