use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0} (must be >= 1)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("cannot bundle an empty set of hypervectors")]
    EmptyBundle,

    #[error("invalid hypervector text: {0}")]
    ParseHypervector(String),

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),

    #[error("empty input sequence")]
    EmptySequence,

    #[error("invalid encoder configuration: {0}")]
    InvalidConfig(String),

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("associative memory is empty")]
    EmptyMemory,

    #[error("invalid ferroelectric parameters: {0}")]
    InvalidParams(String),

    #[error("switching-time fit failed: {0}")]
    FitFailure(String),

    #[error("write voltage {v_w} V is at or below the fitted offset {v0} V")]
    SwitchDomain { v_w: f64, v0: f64 },

    #[error("invalid cost inputs: {0}")]
    InvalidCostInput(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("training set is missing class {0}")]
    MissingClass(&'static str),

    #[error("bad file format: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
