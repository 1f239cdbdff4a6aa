use thiserror::Error;

/// Which of the SP-triple validity conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpTripleViolation {
    ANotPsd,
    BNotPsd,
    ZeroSpaceLeak,
    SchurViolation,
}

impl std::fmt::Display for SpTripleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpTripleViolation::ANotPsd => "A-not-PSD",
            SpTripleViolation::BNotPsd => "B-not-PSD",
            SpTripleViolation::ZeroSpaceLeak => "zero-space-leak",
            SpTripleViolation::SchurViolation => "schur-violation A >= C B^- C^dag",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },
    #[error("the two Kraus lists do not represent the same map (Choi distance {distance:.3e})")]
    NotSameChannel { distance: f64 },
    #[error("channel is not subspace preserving (forbidden-block weight {residual:.3e})")]
    NotSubspacePreserving { residual: f64 },
    #[error("invalid SP triple: {0}")]
    InvalidSpTriple(SpTripleViolation),
    #[error("invalid gluing matrix: largest singular value {sigma_max} exceeds 1")]
    InvalidGluingMatrix { sigma_max: f64 },
    #[error("operator list is not a Kraus representation of the given channel")]
    NotARepresentation,
    #[error("channel blocks do not match the two given channels")]
    NotAGluingOfThese,
    #[error("channel is not in the gluing family of the given representations (residual {residual:.3e})")]
    NotInGluingFamily { residual: f64 },
    #[error("gluing matrix has rank > 1; not an LSP gluing")]
    NotLsp,
    #[error("zero gluing matrix: rank-1 factorization is ambiguous")]
    ZeroMatrix,
    #[error("invalid LSP coefficient vectors: {0}")]
    InvalidLspVectors(String),
    #[error("undefined probe: cross-block weight |alpha||beta| vanishes")]
    UndefinedProbe,
}

pub type Result<T> = std::result::Result<T, Error>;
