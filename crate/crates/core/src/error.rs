use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension must be at least 2, got {0}")]
    BadDimension(u32),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generator {index} does not satisfy g^D = +I")]
    Inadmissible { index: usize },

    #[error("dimension {0} is composite; decompose it with the crt module first")]
    CompositeDimension(u32),

    #[error("dimension {dim} is not square-free (divisible by {prime}^2)")]
    NotSquareFree { dim: u32, prime: u32 },

    #[error("tableau is not a pure stabilizer state: {0}")]
    NotPure(String),

    #[error("operation needs party labels on every site")]
    MissingParties,

    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("gate acts twice on site {0}")]
    RepeatedSite(usize),

    #[error("multiplier {alpha} is not invertible modulo {dim}")]
    NotInvertible { alpha: u32, dim: u32 },

    #[error("operator is the identity")]
    IdentityOperator,

    #[error("deterministic measurement has outcome {forced}, requested {requested}")]
    OutcomeContradiction { forced: u32, requested: u32 },

    #[error("measurement branch has zero probability")]
    ZeroProbability,

    #[error("trim plan requested for an infeasible verdict")]
    Infeasible,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("plane is degenerate: {0}")]
    Degenerate(String),

    #[error("density matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
}
