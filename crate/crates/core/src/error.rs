use thiserror::Error;

use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpError {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: Space, right: Space },
    #[error("operator `{label}` expected on {expected}, found {found}")]
    WrongSpace {
        label: String,
        expected: &'static str,
        found: Space,
    },
    #[error("operator `{label}` is not diagonal: off-diagonal magnitude {max_off}")]
    NotDiagonal { label: String, max_off: f64 },
    #[error("operator `{label}` is not Hermitian: ‖A − A†‖_max = {deviation}")]
    NotHermitian { label: String, deviation: f64 },
    #[error("function undefined at diagonal entry {index} (value {value})")]
    DomainError { index: usize, value: f64 },
    #[error("negative diagonal entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("guard band g = {g} out of range for n_max = {n_max}")]
    GuardOutOfRange { g: usize, n_max: usize },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("branch − requires n >= 1, got n = {n}")]
    InvalidBranch { n: usize },
    #[error("state index n = {n} exceeds n_max = {n_max}")]
    StateOutOfRange { n: usize, n_max: usize },
    #[error("mixing angle undefined: J = 0 at resonance")]
    ZeroCoupling,
    #[error("matrix-element range {lo}..={hi} leaves the guard band (n <= {limit})")]
    RangeOutsideGuard { lo: usize, hi: usize, limit: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

pub type Result<T> = std::result::Result<T, OpError>;
