use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("dataset contains no tag assignments")]
    EmptyDataset,

    #[error("no user has at least two posts; nothing to hold out")]
    NoTestPosts,

    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    #[error("cannot normalize an empty score map")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    BadParam(String),

    #[error("neither the user nor the resource has any tags in the training data")]
    EmptyCandidates,

    #[error(
        "weight spreading did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("relevant tag set is empty")]
    EmptyRelevantSet,

    #[error("report has no rows")]
    EmptyReport,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
