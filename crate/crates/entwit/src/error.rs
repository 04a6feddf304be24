use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A square matrix was required.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Hermiticity check failed (max entrywise |M - M†| above tolerance).
    #[error("matrix is not Hermitian: max |M - M\u{2020}| entry = {deviation:.3e} (tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// The realigned matrix must be Hermitian for the positivity analysis.
    #[error("realigned matrix is not Hermitian: max deviation {deviation:.3e} (tol {tol:.3e})")]
    RealignmentNotHermitian { deviation: f64, tol: f64 },

    /// Matrix dimensions do not match the declared subsystem dimensions.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// A density-matrix invariant (Hermiticity, unit trace, positivity) failed.
    #[error("not a state: {reason}")]
    NotAState { reason: String },

    /// Family weights do not satisfy their normalisation constraint.
    #[error("bad normalisation: {context}")]
    BadNormalization { context: String },

    /// One or more family parameters are out of range; all violations listed.
    #[error("bad parameter(s): {}", violations.join("; "))]
    BadParameter { violations: Vec<String> },

    /// Map parameters must be non-negative and not both zero.
    #[error("bad map parameters: {context}")]
    BadMapParams { context: String },

    /// The CT scan grid was empty.
    #[error("empty grid")]
    EmptyGrid,

    /// Unknown state-family name.
    #[error("unknown family: {name}")]
    UnknownFamily { name: String },

    /// A scan range could not be parsed or is ill-formed.
    #[error("bad range: {context}")]
    BadRange { context: String },

    /// Matrix entries must be finite.
    #[error("non-finite matrix entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
