use alloc::string::String;

/// Errors reported by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The point or cloud lives in a space the metric does not measure.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    /// The operation needs a nonempty set.
    #[error("empty point set")]
    Empty,
    /// Instance larger than what an exhaustive routine accepts.
    #[error("instance too large: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    /// The map is not invertible in the requested direction.
    #[error("unsupported direction for {0}")]
    UnsupportedDirection(&'static str),
    /// Step-halving comparison exceeded the accuracy budget.
    #[error("integration accuracy: step-halving discrepancy {discrepancy:e} exceeds {tolerance:e} at x = {x}, y = {y}")]
    Accuracy {
        discrepancy: f64,
        tolerance: f64,
        x: f64,
        y: f64,
    },
    /// A resource limit (point count, grid size) was hit.
    #[error("resource limit: {0}")]
    Resource(String),
    /// The tangency has order above the jet degree, so no finite bound exists.
    #[error("tangency exceeds jet degree r = {0}; no finite cardinality bound")]
    Unbounded(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
