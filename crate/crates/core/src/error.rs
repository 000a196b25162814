use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("block code is not a bijection (witness {witness})")]
    NotBijective { witness: String },
    #[error("block code refers to a word outside the language: {word}")]
    NotClosed { word: String },
    #[error("block code is missing a value for {word}")]
    IncompleteCode { word: String },
    #[error("clopen pieces overlap at {word}")]
    OverlappingPieces { word: String },
    #[error("word too short: need coordinates {need}, got {got}")]
    WordTooShort { need: String, got: String },
    #[error("element has order exceeding the cap {cap}")]
    InfiniteOrder { cap: usize },
    #[error("operation unsupported for this system: {0}")]
    UnsupportedSystem(String),
    #[error("letter frequencies leave the supported number field: {0}")]
    IrrationalFrequency(String),
    #[error("index is not an integer: {value}")]
    NonIntegerIndex { value: String },
    #[error("element has nonzero index {index}")]
    NonzeroIndex { index: i64 },
    #[error("no admissible neighborhood found up to radius {radius}")]
    NeighborhoodSearchExhausted { radius: usize },
    #[error("first return time exceeds {cap}")]
    ReturnTimeCapExceeded { cap: usize },
    #[error("disjointness hypothesis violated: {0}")]
    DisjointnessViolated(String),
    #[error("letters are not separated; a {block_len}-block recoding is required but disabled")]
    RecodingRequired { block_len: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable code for reports and exit diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSystem(_) => "invalid_system",
            Error::ResourceCap(_) => "resource_cap",
            Error::NotBijective { .. } => "not_bijective",
            Error::NotClosed { .. } => "not_closed",
            Error::IncompleteCode { .. } => "incomplete_code",
            Error::OverlappingPieces { .. } => "overlapping_pieces",
            Error::WordTooShort { .. } => "word_too_short",
            Error::InfiniteOrder { .. } => "infinite_order",
            Error::UnsupportedSystem(_) => "unsupported_system",
            Error::IrrationalFrequency(_) => "irrational_frequency",
            Error::NonIntegerIndex { .. } => "non_integer_index",
            Error::NonzeroIndex { .. } => "nonzero_index",
            Error::NeighborhoodSearchExhausted { .. } => "neighborhood_search_exhausted",
            Error::ReturnTimeCapExceeded { .. } => "return_time_cap_exceeded",
            Error::DisjointnessViolated(_) => "disjointness_violated",
            Error::RecodingRequired { .. } => "recoding_required",
            Error::Inconclusive(_) => "inconclusive",
            Error::Parse { .. } => "parse_error",
            Error::Config(_) => "config_error",
        }
    }
}
