use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. Each variant maps to a stable
/// `error_kind` string used in machine-readable error documents.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("capacity exceeded: ball enumeration stopped at radius {radius} ({elements} elements, budget {budget})")]
    Capacity {
        radius: usize,
        elements: usize,
        budget: usize,
    },

    #[error("degenerate element: {0}")]
    DegenerateElement(String),

    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),

    #[error("element {0} is not loxodromic (finite order)")]
    NotLoxodromic(String),

    #[error("consistency violation: {0}")]
    ConsistencyViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget exhausted: {0}")]
    SearchBudget(String),

    #[error("work radius {work_radius} is insufficient: {detail}")]
    InsufficientWorkRadius { work_radius: usize, detail: String },

    #[error("node budget of {0} exceeded during exact cover search")]
    NodeBudget(u64),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "malformed_input",
            Error::Capacity { .. } => "capacity",
            Error::DegenerateElement(_) => "degenerate_element",
            Error::UnsupportedBackend(_) => "unsupported_backend",
            Error::NotLoxodromic(_) => "not_loxodromic",
            Error::ConsistencyViolation(_) => "consistency_violation",
            Error::Precondition(_) => "precondition",
            Error::SearchBudget(_) => "search_budget",
            Error::InsufficientWorkRadius { .. } => "insufficient_work_radius",
            Error::NodeBudget(_) => "node_budget",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::MalformedInput(e.to_string())
    }
}
