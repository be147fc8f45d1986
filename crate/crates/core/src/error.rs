use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}` -> `{1}`")]
    DuplicateEdge(String, String),
    #[error("duplicate edge label `{0}`")]
    DuplicateLabel(String),
    #[error("malformed graph document: {0}")]
    GraphFormat(String),

    #[error("block map parse error on line {line}: {message}")]
    BlockMapParse { line: usize, message: String },
    #[error("invalid block code: {0}")]
    InvalidCode(String),

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("instance exceeds the size cap: {0}")]
    SizeCap(String),
    #[error("entropy is undefined for an empty shift")]
    EmptyShift,
    #[error("power iteration did not reach tolerance within {0} iterations")]
    NoConvergence(usize),

    #[error("precondition violated: {0}")]
    Contract(String),
    #[error("invalid gadget parameter: {0}")]
    Gadget(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
