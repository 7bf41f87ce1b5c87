use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure constants violate the Jacobi identity (defect {defect})")]
    JacobiViolated { defect: String },

    #[error("invalid bracket entry: {0}")]
    InvalidBracket(String),

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("matrix is singular")]
    Singular,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("matrix is not a derivation (Leibniz defect {defect})")]
    NotDerivation { defect: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("subspace is not invariant under the derivation")]
    NotInvariant,

    #[error("not eliminable: a = d, use the positive-eigenvalue path")]
    NotEliminable,

    #[error("nilradical would grow: {0}")]
    NilpotentDerivation(String),

    #[error("derivation outside the supported catalog: {0}")]
    Unsupported(String),

    #[error("infeasible y: w[{index}] = {value} <= 0, choose smaller y")]
    InfeasibleY { index: usize, value: String },

    #[error("target not in relative interior of the cone: {0}")]
    NotInCone(String),

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("no negative Ricci metric exists: {0}")]
    Refused(String),

    #[error("degeneration search exhausted at s = {s}: max eigenvalue {max_eigenvalue}")]
    DegenerationExhausted { s: f64, max_eigenvalue: f64 },

    #[error("certificate failure: {0}")]
    CertificateFailure(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
