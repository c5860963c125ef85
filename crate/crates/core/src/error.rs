use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("reference set `{0}` is empty")]
    EmptyReferenceSet(String),

    #[error("paper `{paper_id}` refers to unknown reference set `{reference_key}`")]
    MissingReferenceSet { paper_id: String, reference_key: String },

    #[error("unknown subset `{0}`")]
    UnknownSubset(String),

    #[error("duplicate subset `{0}`")]
    DuplicateSubset(String),

    #[error("subset `{0}` has no papers")]
    EmptySubset(String),

    #[error("invalid class scheme: {0}")]
    InvalidScheme(String),

    #[error("inconsistent normalization context: {0}")]
    InconsistentContext(String),

    #[error("{0}")]
    InvalidInput(String),

    /// The computation is defined but carries no information for this
    /// input (all differences zero, fewer than two observations, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("paper `{0}` has a zero expected citation rate")]
    ZeroExpectation(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.root(), Error::Degenerate(_))
    }
}
