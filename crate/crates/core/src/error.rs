use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),

    #[error("signal energy must be positive and finite, got {0}")]
    InvalidEnergy(f64),

    #[error("symbol {symbol} out of range for alphabet of size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("signal set has {points} points but q = {q}")]
    PointCountMismatch { points: usize, q: usize },

    #[error("signal set points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),

    #[error("kernel table must be square and non-empty")]
    NotSquare,

    #[error("kernel row {0} is not a permutation (f not invertible in u2)")]
    RowNotPermutation(usize),

    #[error("kernel column {0} is not a permutation (f not invertible in u1)")]
    ColumnNotPermutation(usize),

    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),

    #[error("unknown kernel name `{0}`")]
    UnknownKernel(String),

    #[error("unknown signal set `{0}`")]
    UnknownSignalSet(String),

    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("subset enumeration is limited to q <= 16, got {0}")]
    AlphabetTooLarge(usize),

    #[error("subset size K must satisfy 2 <= K <= q-1, got K = {k} for q = {q}")]
    InvalidSubsetSize { k: usize, q: usize },

    #[error("expected a good-channel spectrum")]
    NotGoodSpectrum,

    #[error("exhaustive search supports q <= {max}, got {q}")]
    SearchTooLarge { q: usize, max: usize },

    #[error("block length {0} is not a power of two >= 2")]
    BlockLength(usize),

    #[error("schedule has {got} stages, block length needs {want}")]
    ScheduleLength { got: usize, want: usize },

    #[error("frozen index {index} invalid for block length {n}")]
    FrozenIndex { index: usize, n: usize },

    #[error("sequence length {got} does not match block length {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("likelihood vector at position {0} is invalid")]
    InvalidLikelihood(usize),

    #[error("degenerate all-zero posterior at decoder node (level {level}, offset {offset}, position {position})")]
    Degenerate {
        level: usize,
        offset: usize,
        position: usize,
    },

    #[error("number of trials must be at least 1")]
    ZeroTrials,

    #[error("information size K = {k} out of range for N = {n}")]
    InfoSize { k: usize, n: usize },

    #[error("invalid noise model: {0}")]
    Noise(String),
}

pub type Result<T> = std::result::Result<T, Error>;
