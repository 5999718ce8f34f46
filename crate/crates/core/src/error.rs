use thiserror::Error;

use crate::landscape::CriticalManifoldId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandscapeError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("Bloch vector norm {norm} exceeds 1 (not a state)")]
    NotAState { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("completeness constraint violated: residual {residual:e} exceeds {tolerance:e}")]
    Completeness { residual: f64, tolerance: f64 },

    #[error("Kraus set must hold 1..=4 operators, got {0}")]
    KrausCount(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("frame is not orthonormal (residual {0:e})")]
    NotOrthonormal(f64),

    #[error("rank collapse during orthonormalization (column norm {0:e})")]
    RankCollapse(f64),

    #[error("{id:?} is not a critical manifold for |w| = {norm_w}: {reason}")]
    IllegalManifold {
        id: CriticalManifoldId,
        norm_w: f64,
        reason: &'static str,
    },

    #[error("Morse signature is only defined here for saddle manifolds, got {0:?}")]
    NotASaddle(CriticalManifoldId),

    #[error("ambiguous classification: J = {value} is within 2e-6 of both {a} and {b}")]
    Ambiguous { value: f64, a: f64, b: f64 },

    #[error("flow stalled near critical level: gradient norm {grad_norm:e} at J = {value}")]
    FlowStalled { value: f64, grad_norm: f64 },

    #[error("level {mu} is not admissible for tracing: {reason}")]
    LevelRefused { mu: f64, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LandscapeError>;
