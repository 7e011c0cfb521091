use std::path::PathBuf;

/// Errors raised by the operator, quadrature and reporting layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pi table is summable (partial sum {partial_sum:.6e} with certified tail); the construction needs a non-summable sequence")]
    SummablePi { partial_sum: f64 },

    #[error("weight family `{family}` is not interleaved; a diagonal similarity is only available for interleaved families")]
    NotInterleaved { family: String },

    #[error("finite section half-width {requested} exceeds the resource guard {max}")]
    ResourceGuard { requested: usize, max: usize },

    #[error("spectral point has gap {gap:.3e} below the floor {floor:.3e}")]
    GapTooSmall { gap: f64, floor: f64 },

    #[error("geometric tail does not contract (ratio {ratio:.6}); the weights are unbounded in the needed direction")]
    DivergentTail { ratio: f64 },

    #[error("no tail bound is available for this coefficient series; use circle quadrature")]
    NoTailBound,

    #[error("{what} did not converge: {detail}")]
    NonConvergent { what: &'static str, detail: String },

    #[error("diagonal operator is not invertible at index {index} (entry {entry:e})")]
    NotInvertible { index: i64, entry: f64 },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("dense solve is singular or near-singular (pivot ratio {pivot_ratio:.3e})")]
    SingularSolve { pivot_ratio: f64 },

    #[error("evaluation point {distance:.3e} from the grid support is too close for spacing {spacing:.3e}")]
    TooCloseToSupport { distance: f64, spacing: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
