use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of modes must be positive")]
    ZeroModes,

    #[error("matrix has shape {rows}x{cols}, expected a square matrix of even dimension")]
    BadShape { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not symplectic (max deviation {0:e})")]
    NotSymplectic(f64),

    #[error("covariance matrix is unphysical (min eigenvalue of sigma + i*Omega is {0:e})")]
    Unphysical(f64),

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("squeezer needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("invalid mode partition: {0}")]
    InvalidPartition(String),

    #[error("PPT test is inconclusive for a {0}x{1} mode bipartition")]
    Inconclusive(usize, usize),

    #[error("spectral solver failed: {0}")]
    SpectralFailure(String),

    #[error("squeezing parameters must be finite and nonnegative (a = {a}, s = {s})")]
    InvalidSqueezing { a: f64, s: f64 },

    #[error("argument {0} is below 1 and outside the contangle domain")]
    OutOfDomain(f64),

    #[error("qudit dimension d = {0} is invalid: d = 2N requires an even N >= 2, i.e. d must be a positive multiple of 4")]
    InvalidQuditDimension(usize),

    #[error("materializing d = {d} needs {amplitudes} amplitudes, above the cap for d <= {cap}")]
    TooLarge {
        d: usize,
        amplitudes: usize,
        cap: usize,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
