use thiserror::Error;

/// Errors reported by waveform, channel, estimator and receiver operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("subcarrier count must be even (got {0}): the chirp-periodic prefix only degenerates to a cyclic prefix for even N")]
    OddSubcarrierCount(usize),

    #[error("subcarrier count must be at least 2 (got {0})")]
    TooFewSubcarriers(usize),

    #[error("subcarrier spacing must be positive (got {0})")]
    NonPositiveSpacing(f64),

    #[error("prefix length {cp_len} must be shorter than the symbol length {n_subcarriers}")]
    PrefixTooLong { cp_len: usize, n_subcarriers: usize },

    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("signal already carries a prefix of {0} samples")]
    PrefixPresent(usize),

    #[error("signal carries a prefix of {got} samples, expected {expected}")]
    PrefixMismatch { expected: usize, got: usize },

    #[error("bit count must be even for QPSK (got {0})")]
    OddBitCount(usize),

    #[error("delay of {delay_s} s exceeds the maximum unambiguous delay: the delay bin {bin} must stay below the symbol length {n_subcarriers}")]
    DelayOutOfRange {
        delay_s: f64,
        bin: i64,
        n_subcarriers: usize,
    },

    #[error("tap delay {delay_bins} exceeds the prefix length {cp_len}; inter-symbol leakage is not modeled")]
    DelayExceedsPrefix { delay_bins: usize, cp_len: usize },

    #[error("channel must contain at least one tap")]
    EmptyChannel,

    #[error("negative target range {0} m")]
    NegativeRange(f64),

    #[error("empty signal")]
    EmptySignal,

    #[error("empty grid")]
    EmptyGrid,

    #[error("CFAR window of {window} cells exceeds the profile length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("CFAR training cell count must be at least 1")]
    NoTrainingCells,

    #[error("false-alarm probability must lie in (0, 1), got {0}")]
    BadPfa(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("equalizer system is singular at zero noise; regularize or supply n0 > 0")]
    SingularSystem,

    #[error("noise variance must be nonnegative (got {0})")]
    NegativeNoise(f64),

    #[error("delay-Doppler grid must be square with M*N = {expected} (got {m}x{n})")]
    BadGridShape { expected: usize, m: usize, n: usize },

    #[error("subcarrier count {0} must be a perfect square for the delay-Doppler baseline")]
    NotPerfectSquare(usize),

    #[error("{0}")]
    InvalidConfig(String),
}
