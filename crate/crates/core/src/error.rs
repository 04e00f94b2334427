use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree bound must be at least 1")]
    InvalidDelta,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} has degree {degree}, exceeding the bound {delta}")]
    DegreeExceeded {
        vertex: usize,
        degree: usize,
        delta: usize,
    },
    #[error("roots {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("birooted balls need radius at least {min}, got {got}")]
    RadiusTooSmall { min: usize, got: usize },
    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),
    #[error("radius {requested} is not reachable from a code of radius {available}")]
    RadiusUnreachable { requested: usize, available: usize },
    #[error("invalid ball: {0}")]
    InvalidBall(String),
    #[error("malformed code: {0}")]
    MalformedCode(String),
    #[error("expected a {expected} code")]
    WrongCodeKind { expected: &'static str },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("graph has {0} vertices; brute-force oracle supports at most 8")]
    TooManyVertices(usize),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),
    #[error("invalid graphing: {0}")]
    InvalidGraphing(String),
    #[error("leaf ball around {point} exceeds the vertex budget of {budget}")]
    BudgetExceeded { point: String, budget: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
