//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error(
        "tensor is not associative: defect {defect:.6e} exceeds tolerance {tol:.6e}; \
         worst quadratic residual at basis indices (i,j,k,p) = ({i},{j},{k},{p}) (1-based)"
    )]
    NotAssociative {
        defect: f64,
        tol: f64,
        i: usize,
        j: usize,
        k: usize,
        p: usize,
    },

    #[error("multiplication has no unit element within tolerance {tol:.3e}")]
    NotUnital { tol: f64 },

    #[error(
        "semigroup table is not associative: (s{i} s{j}) s{k} = s{lhs} but s{i} (s{j} s{k}) = s{rhs} (1-based)"
    )]
    TableNotAssociative {
        i: usize,
        j: usize,
        k: usize,
        lhs: usize,
        rhs: usize,
    },

    #[error("table entry out of range at ({i},{j}): {got} not in 1..={size}")]
    TableEntryOutOfRange { i: usize, j: usize, got: usize, size: usize },

    #[error("weight {index} is not strictly positive: {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("norm contexts differ: {0}")]
    NormContextMismatch(&'static str),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("series did not converge: {0}")]
    SeriesDiverged(String),

    #[error(
        "proof-path unit disagrees with the directly solved unit: distance {distance:.3e} exceeds {tol:.3e}"
    )]
    UnitMismatch { distance: f64, tol: f64 },

    #[error("map T is not an algebra homomorphism up to tolerance: residual {residual:.3e} > {tol:.3e}")]
    NotHomomorphism { residual: f64, tol: f64 },

    #[error("linear map is not invertible or too ill-conditioned: {0}")]
    Singular(String),

    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("invalid instance file: {0}")]
    InvalidInstance(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
