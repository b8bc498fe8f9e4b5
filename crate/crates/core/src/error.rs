use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not antisymmetric: max |A + A^T| = {violation:e}")]
    NotAntisymmetric { violation: f64 },

    #[error("matrix is not hermitian: max |A - A^H| = {violation:e}")]
    NotHermitian { violation: f64 },

    #[error("matrix is not orthogonal: max |O^T O - 1| = {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("model `{model}` is missing parameter `{param}`")]
    MissingParameter { model: String, param: String },

    #[error("model `{model}` does not take parameter `{param}`")]
    UnexpectedParameter { model: String, param: String },

    #[error("invalid parameter `{param}`: {reason}")]
    InvalidParameter { param: String, reason: String },

    #[error("{sites} sites is too short for interaction range {range} ({boundary})")]
    ChainTooShort {
        sites: usize,
        range: usize,
        boundary: &'static str,
    },

    /// Gapless one-particle spectrum; the quasi-free ground state is not unique.
    #[error("degenerate ground state: {} one-particle eigenvalue(s) below {tolerance:e}", eigenvalues.len())]
    DegenerateGroundState { eigenvalues: Vec<f64>, tolerance: f64 },

    #[error("covariance is not pure: max |G G^T - 1| = {residual:e}")]
    ImpureCovariance { residual: f64 },

    #[error("covariance entries exceed the unit ball: largest singular value {value}")]
    InvalidCovariance { value: f64 },

    #[error("site {site} lies outside the window [{first}, {last}]")]
    SiteOutsideWindow { site: i64, first: i64, last: i64 },

    #[error("{what} must have odd parity")]
    WrongParity { what: &'static str },

    #[error("{what} must be supported on sites {requirement}")]
    BadSupport {
        what: &'static str,
        requirement: String,
    },

    #[error("series has {found} points, at least {required} are needed")]
    SeriesTooShort { found: usize, required: usize },

    #[error("windows must be non-empty and strictly increasing")]
    BadWindows,

    #[error("window of half-width {window} around the cut leaves a margin of {margin} sites (need {required})")]
    MarginViolation {
        window: usize,
        margin: i64,
        required: i64,
    },

    #[error("Z2 index undefined: split defect verdict is {verdict}")]
    IndexUndefined { verdict: String },

    #[error("{sites} sites exceeds the exact-diagonalization limit of {max}")]
    DimensionOverflow { sites: usize, max: usize },

    #[error("exact ground state is degenerate (gap {gap:e})")]
    DegenerateEdGround { gap: f64 },

    #[error("eigensolver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
