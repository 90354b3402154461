use thiserror::Error;

/// Errors raised by the numerical kernel, the state/channel constructors and
/// the measure and witness routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TextureError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    SizeCap { dim: usize, max: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |M_ij - conj(M_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("non-positive power {power} of a singular matrix")]
    SingularPower { power: f64 },

    #[error("Hermitian eigensolver did not converge (dim {dim}, norm estimate {norm_estimate:e})")]
    EigenFailure { dim: usize, norm_estimate: f64 },

    #[error("non-Hermitian pairing: imaginary residue {residue:e} in Tr(M rho)")]
    NonHermitianPairing { residue: f64 },

    #[error("vector is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("Kraus operators are not complete: max |sum K^dag K - I| = {deviation:e}")]
    Incomplete { deviation: f64 },

    #[error("non-trace-preserving map: trace drift {drift:e}")]
    NonTracePreserving { drift: f64 },

    #[error("parameter `{param}` = {value} outside its domain: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("index error: {0}")]
    Index(String),

    #[error("orthonormalization failed after {attempts} attempts")]
    Orthonormalization { attempts: usize },

    #[error("texture witness condition 1 violated: Tr(W f1) = {free_expectation:e}")]
    FreeExpectationNegative { free_expectation: f64 },

    #[error("not a witness for any state ({family}): smallest eigenvalue {min_eigenvalue:e}")]
    NotAWitness { family: String, min_eigenvalue: f64 },
}

pub type Result<T> = std::result::Result<T, TextureError>;
