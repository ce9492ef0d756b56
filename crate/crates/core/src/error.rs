use thiserror::Error;

/// Errors raised by the simulation and planning library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulation: {0}")]
    InvalidModulation(String),

    #[error("invalid pulse filter: {0}")]
    InvalidFilter(String),

    #[error("bit count {len} is not a multiple of {per_symbol} bits per symbol")]
    RaggedBits { len: usize, per_symbol: usize },

    #[error("samples-per-symbol mismatch: waveform has {waveform}, filter has {filter}")]
    SpsMismatch { waveform: usize, filter: usize },

    #[error("invalid index-modulation configuration: {0}")]
    InvalidIndexConfig(String),

    #[error("filter bank correlation {corr:.4} between filters {i} and {j} is not below {limit}")]
    BankCorrelation {
        i: usize,
        j: usize,
        corr: f64,
        limit: f64,
    },

    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("frequency {freq_ghz} GHz outside atmospheric table [{lo_ghz}, {hi_ghz}] GHz")]
    OutsideTable {
        freq_ghz: f64,
        lo_ghz: f64,
        hi_ghz: f64,
    },

    #[error("hypothesis count {count} exceeds budget {budget}")]
    HypothesisBudget { count: u128, budget: u128 },

    #[error("channel matrix is rank deficient ({rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid link plan input: {0}")]
    InvalidPlan(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
