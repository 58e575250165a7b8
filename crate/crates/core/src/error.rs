use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad `(n, k)` combination, or an operation called outside the
    /// parameter regime where its construction is defined.
    #[error("parameter error: {0}")]
    Params(String),

    #[error("element {element} out of range 1..={n}")]
    OutOfRange { element: u32, n: u32 },

    #[error("elements {first} and {second} are cyclically consecutive in [{n}]")]
    NotStable { first: u32, second: u32, n: u32 },

    #[error("expected {expected} elements, got {got}")]
    WrongSize { expected: u32, got: u32 },

    #[error("sets belong to different graphs: SG({}, {}) vs SG({}, {})", .left.0, .left.1, .right.0, .right.1)]
    MismatchedParams { left: (u32, u32), right: (u32, u32) },

    #[error("cannot parse set {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("{0} is not a vertex of this graph")]
    NotAVertex(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A property that the constructions guarantee did not hold. Always a bug
    /// or a counterexample worth reporting.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("graph is disconnected")]
    Disconnected,
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::Params(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
