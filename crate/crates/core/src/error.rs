use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is a single directed cycle")]
    IsACycle,
    #[error("tree edges contain a cycle through vertex {0}")]
    FEdgesCyclic(String),
    #[error("isomorphism search limited to {limit} vertices, got {got}")]
    SizeLimitExceeded { limit: usize, got: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("empty word")]
    EmptyWord,
    #[error("word is not a periodic point: {0}")]
    NotAPeriodicPoint(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("horizon {horizon} too small for multiplier {multiplier} (needs {needed})")]
    HorizonTooSmall {
        multiplier: String,
        horizon: usize,
        needed: usize,
    },
    #[error("unknown multiplier {0}")]
    UnknownMultiplier(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate parameters (1,1,1): the graph would be a cycle")]
    DegenerateCycle,
    #[error("invariant table is not that of a height-two spherically homogeneous graph")]
    NotSH2,
    #[error("no integer solution: {0}")]
    NonIntegerSolution(String),
    #[error("eta is not an integer: {0}")]
    NonIntegerEta(String),
    #[error("reference graph could not be built: {0}")]
    ReferenceBuildFailed(String),
    #[error("excess {0} is neither 2 nor 4")]
    ExcessNeither2Nor4(i64),
    #[error("no case of the three-vertex analysis applies: {0}")]
    CaseFallthrough(String),
    #[error("round trip failed: {0}")]
    RoundTripFailed(String),
    #[error("family not recognised: {0}")]
    NotInFamily(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by exhausted search resources rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_) | Error::HorizonTooSmall { .. } | Error::SizeLimitExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
