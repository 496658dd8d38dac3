//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid rank {rank} for type {family}")]
    Rank { family: String, rank: usize },
    #[error("cos(pi/{m}) does not lie in Q(2cos(pi/{n}))")]
    IncompatibleConductor { m: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported type {0}")]
    UnsupportedType(String),
    #[error("group order exceeds the bound {bound}; raise it with --group-bound or COXPIZZA_GROUP_BOUND")]
    GroupTooLarge { bound: usize },
    #[error("invalid choice: {0}")]
    InvalidChoice(String),
    #[error("face {below} is not below face {above}")]
    FaceNotBelow { below: usize, above: usize },
    #[error("lambda is not dominant: (lambda, alpha_{0}) < 0")]
    NotDominant(usize),
    #[error("chamber {chamber} has {walls} walls but the essential dimension is {dim}")]
    NonSimplicial { chamber: usize, walls: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("arrangement has {0} hyperplanes; at most 128 are supported")]
    TooManyHyperplanes(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
