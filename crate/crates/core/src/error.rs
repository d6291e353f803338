use thiserror::Error;

/// Errors surfaced by the tower model and the invariant calculators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BottError {
    #[error("stage {stage} has {got} entries, expected {expected}")]
    Shape {
        stage: usize,
        got: usize,
        expected: usize,
    },

    #[error("cannot parse tower list: {0}")]
    Parse(String),

    #[error("fiber index {k0} out of range for height {height}")]
    FiberRange { k0: usize, height: usize },

    #[error("stage index {j} out of range for height {height}")]
    StageRange { j: usize, height: usize },

    #[error("height {height} exceeds the configured cap {cap}")]
    CapExceeded { height: usize, cap: usize },

    #[error("exact KO-theory requires a totally even or terminally odd list; got a mixed one")]
    UnsupportedFamily,

    #[error("degree query on an inhomogeneous value")]
    Inhomogeneous,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, BottError>;
