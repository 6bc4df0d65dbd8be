use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A textual word, stream or table failed to parse.
    #[error("parse error at position {position}: {message} (near `{token}`)")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },

    #[error("bit-stream index {0} is outside the domain t >= 1")]
    StreamIndex(i64),

    #[error("marginal moment <{0}> is not defined by the state")]
    MissingMoment(String),

    #[error("commutator of e({0}) with itself requested; times must differ")]
    EqualTimes(i64),

    #[error("duplicate time {0} in representation request")]
    DuplicateTime(i64),

    #[error("too many distinct times: {0} (limit {1})")]
    TooManyTimes(usize, usize),

    #[error("every grid point was excluded by min_gap = {0}")]
    EmptyGrid(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{mode} mode bound exceeded: {detail}")]
    ModeBound { mode: &'static str, detail: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(position: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            token: token.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
