use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced while decoding a Netpbm stream.
///
/// Each variant names the header field (or payload) that failed so a caller
/// can report exactly what was wrong with the file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("bad magic number: expected P2, P3, P5 or P6")]
    BadMagic,
    #[error("missing or malformed {field} in header")]
    BadHeaderField { field: &'static str },
    #[error("unsupported maxval {0}: only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("dimension overflow: {width}x{height} does not fit in memory")]
    DimensionOverflow { width: usize, height: usize },
    #[error("zero {field} in header")]
    ZeroDimension { field: &'static str },
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample {index} out of range: {value} > 255")]
    SampleOutOfRange { index: usize, value: u32 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },
    #[error("pnm parse error: {0}")]
    Pnm(#[from] PnmError),
    #[error("invalid parameter `{key}`: {message}")]
    Param { key: String, message: String },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("stage {index}: {source}")]
    Stage {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn param(key: &str, msg: impl Into<String>) -> Self {
        Error::Param {
            key: key.to_string(),
            message: msg.into(),
        }
    }

    /// True when the error came from the filesystem rather than from the
    /// content or parameters supplied.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Stage { source, .. } => source.is_io(),
            _ => false,
        }
    }
}
