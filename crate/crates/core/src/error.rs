use thiserror::Error;

/// Errors raised by the walk toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// (x, y) does not lie on the class constraint curve.
    #[error("coin constraint violated: residual {residual:e} exceeds {tolerance:e}")]
    Constraint { residual: f64, tolerance: f64 },

    /// x lies outside the admissible interval of the class.
    #[error("coin parameter x = {x} outside [{lo}, {hi}]")]
    Range { x: f64, lo: f64, hi: f64 },

    /// A numerical routine failed to reach its accuracy target.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Exact integer arithmetic overflowed.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
