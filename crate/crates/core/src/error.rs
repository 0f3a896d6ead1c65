use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("path does not compose: {0}")]
    BrokenPath(String),
    #[error("range mismatch: r(p) = {p_range} but r(q) = {q_range}")]
    RangeMismatch { p_range: String, q_range: String },
    #[error("not a cycle of the graph: {0}")]
    NotACycle(String),
    #[error("vertex set is not hereditary and saturated: {0}")]
    NotHereditarySaturated(String),
    #[error("invalid admissible pair: {0}")]
    InvalidPair(String),
    #[error("improper pair: H is the whole vertex set")]
    ImproperPair,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("malformed branching system: {0}")]
    MalformedSystem(String),
    #[error("window overflow: `{element}` escapes the truncation window")]
    WindowOverflow { element: String },
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not homogeneous")]
    NotHomogeneous,
}

pub type Result<T> = std::result::Result<T, Error>;
