use thiserror::Error;

/// Errors produced by the phase extraction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{format} error at byte {offset}: {message}")]
    Format {
        format: &'static str,
        offset: u64,
        message: String,
    },

    #[error("window support {support}x{support} does not fit in a {width}x{height} image")]
    WindowTooLarge {
        support: usize,
        width: usize,
        height: usize,
    },

    #[error("frequency grid has no samples")]
    EmptyGrid,

    #[error("no carrier peak outside the exclusion radius")]
    NoCarrier,

    #[error("region of interest covers the DC bin")]
    RoiCoversDc,

    #[error("no jointly valid pixels")]
    NoValidPixels,

    #[error("need at least {needed} contiguous valid samples, longest run is {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("row {row} out of range for height {height}")]
    RowOutOfRange { row: usize, height: usize },

    #[error("contour level list is empty")]
    EmptyLevels,

    #[error("frame {index}: {source}")]
    Frame {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn format(format: &'static str, offset: u64, message: impl Into<String>) -> Self {
        Error::Format {
            format,
            offset,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input parameters or files rather than
    /// by a failure while running.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Io(_) | Error::Json(_) => false,
            Error::Frame { source, .. } => source.is_validation(),
            _ => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
