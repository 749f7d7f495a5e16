use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("zero matrix has no primitive representative")]
    ZeroMatrix,
    #[error("variable contexts differ: {left:?} vs {right:?}")]
    ContextMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("invalid variable context: {0}")]
    BadContext(String),
    #[error("function failed the homogeneous-quadratic check")]
    NotHomogeneousQuadratic,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("-1 is an eigenvalue (I + M is singular)")]
    MinusOneEigenvalue,
    #[error("no sign diagonal D makes M + D invertible")]
    NoSignDiagonal,
    #[error("M * M^t is not a scalar matrix")]
    NotScalarGram,
    #[error("gamma is zero")]
    ZeroGamma,
    #[error("matrix size must be odd, got {0}")]
    EvenSize(usize),
    #[error("{form} has degree {degree} in w; elimination needs degree <= 1")]
    WDegreeTooHigh { form: &'static str, degree: i64 },
    #[error("left tuple violates h = +-a != 0, b^2+...+g^2 = 6a^2")]
    NotW1,
    #[error("degenerate step `{step}`: {reason}")]
    Degenerate { step: &'static str, reason: &'static str },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("matrix is not an Euler magic matrix")]
    NotEulerMagic,
    #[error("polynomial matrix improper: {0}")]
    ImproperPolynomialMatrix(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
