use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not parity-homogeneous")]
    NotHomogeneous,

    #[error("vector field is not conformal")]
    NotConformal,

    #[error("operator is not of first order")]
    NotFirstOrder,

    #[error("element has xi-degree {0}, which is not allowed here")]
    BadXiDegree(usize),

    #[error("dimension {0} is odd; an even dimension is required")]
    OddDimension(usize),

    #[error("signature ({p},{q}) requires p >= q")]
    SignatureOrder { p: usize, q: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("inconsistent weights: {0}")]
    InconsistentWeights(String),

    #[error("Hamiltonian degree {found} exceeds {limit}")]
    DegreeExceeded { found: usize, limit: usize },

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
