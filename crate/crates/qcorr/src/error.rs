use thiserror::Error;

pub type Result<T> = std::result::Result<T, QcorrError>;

/// Errors surfaced by state construction, validation, and the quantifier searches.
#[derive(Debug, Error)]
pub enum QcorrError {
    #[error("matrix is not Hermitian: max |M - M^dag| entry is {max_dev:.3e}")]
    NotHermitian { max_dev: f64 },

    #[error("trace is not one: trace = {trace}")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("basis is not orthonormal: max |B^dag B - I| entry is {max_dev:.3e}")]
    NotOrthonormal { max_dev: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| entry is {max_dev:.3e}")]
    NotUnitary { max_dev: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("size limit exceeded: {context}")]
    SizeLimit { context: String },

    #[error("invalid labels: {context}")]
    InvalidLabels { context: String },

    #[error("invalid argument: {context}")]
    InvalidArgument { context: String },

    #[error("state is not a bipartite two-factor state: factor count is {factors}")]
    NotBipartite { factors: usize },

    #[error("ensemble member {index} is not a product pure state: second Schmidt coefficient {second_coefficient:.3e}")]
    NotProductState {
        index: usize,
        second_coefficient: f64,
    },

    #[error("ensemble does not reconstruct the state: max residual entry {residual:.3e} exceeds {tolerance:.3e}")]
    DecompositionMismatch { residual: f64, tolerance: f64 },

    #[error("unknown coherence measure id '{id}' (expected one of: l1, relent)")]
    UnknownMeasure { id: String },

    #[error(
        "extension search infeasible for dims ({dim_a}, {dim_b}) with max ancilla dim {max_ancilla_dim}: tried ancilla dims {tried:?}"
    )]
    SearchInfeasible {
        dim_a: usize,
        dim_b: usize,
        max_ancilla_dim: usize,
        tried: Vec<(usize, usize)>,
    },

    #[error("partial transpose separability test supports dims (2,2) and (2,3) only, got ({dim_a}, {dim_b})")]
    UnsupportedDims { dim_a: usize, dim_b: usize },

    #[error("unknown suite id '{id}' (expected one of: {expected})")]
    UnknownSuite { id: String, expected: String },

    // The payloads below render inside the message, so they are deliberately
    // not wired up as `source()`: error-chain printers would repeat them.
    #[error("json error: {0}")]
    Json(serde_json::Error),

    #[error("io error: {0}")]
    Io(std::io::Error),
}

impl From<serde_json::Error> for QcorrError {
    fn from(e: serde_json::Error) -> Self {
        QcorrError::Json(e)
    }
}

impl From<std::io::Error> for QcorrError {
    fn from(e: std::io::Error) -> Self {
        QcorrError::Io(e)
    }
}
