use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Vector lengths disagree or a vector is empty.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A scalar parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An edge or cluster refers to a vertex id that does not exist.
    #[error("unknown vertex id `{0}`")]
    Referential(String),

    /// Input values violate a data invariant (duplicates, negatives, self-loops, ...).
    #[error("data error: {0}")]
    Data(String),

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    /// Every distance is zero, so the similarity rescaling is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// With an error located at `line`, `Data` errors gain the line number.
    pub(crate) fn at_line(self, line: u64) -> Self {
        match self {
            Error::Data(msg) => Error::Data(format!("line {line}: {msg}")),
            other => other,
        }
    }
}
