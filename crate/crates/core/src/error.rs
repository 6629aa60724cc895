use thiserror::Error;

/// Errors reported by the TDCS library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no spectrum holes")]
    NoSpectrumHoles,
    #[error("cluster size mismatch: {n_clusters} clusters do not divide {n_unoccupied} unoccupied bins")]
    ClusterSizeMismatch {
        n_unoccupied: usize,
        n_clusters: usize,
    },
    #[error("empty cluster")]
    EmptyCluster,
    #[error("bin index {index} out of range for {n_bins} bins")]
    BinOutOfRange { index: usize, n_bins: usize },
    #[error("symbol {symbol} out of range for CCSK order {m_order}")]
    SymbolOutOfRange { symbol: usize, m_order: usize },
    #[error("CP too short: channel memory {memory} samples exceeds prefix of {cp_len} samples")]
    CpTooShort { memory: usize, cp_len: usize },
    #[error("frame has no cyclic prefix")]
    MissingCp,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Config(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
