use thiserror::Error;

use crate::half::Half;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("particle number {n} outside 1..={max}")]
    ParticleNumber { n: usize, max: usize },

    #[error("j = {j} is not a valid quasi-spin for N = {n}")]
    InvalidSector { j: Half, n: usize },

    #[error("projection {m} outside the ladder of {j}")]
    ProjectionOutOfRange { j: Half, m: Half },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("negative ladder product {value} at M = {m} in ({label}); no real symmetric realization")]
    NegativeProduct { label: String, m: Half, value: f64 },

    #[error("no common real shift c: {0}")]
    IncompatibleConstraints(String),

    #[error("block dimension {dim} exceeds limit {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("eigensolver failed to converge on {dim}x{dim} matrix ({detail})")]
    NoConvergence { dim: usize, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
