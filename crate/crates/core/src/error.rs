use thiserror::Error;

/// Errors produced by word construction, analysis and generator setup.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    InvalidAlphabet { letter: u8, alphabet: usize },

    #[error("alphabet size {0} is not supported (must be in 1..=16)")]
    AlphabetSize(usize),

    #[error("prefix of length {have} is too short: need more than {need} letters")]
    InsufficientPrefix { need: usize, have: usize },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(u8),

    #[error("block capacity {cap} is smaller than the longest letter image ({need})")]
    BlockCapTooSmall { cap: usize, need: usize },

    #[error("letter mapping is not a surjection onto 0..{0}")]
    NotSurjective(usize),

    #[error("directive sequence: {0}")]
    InvalidDirective(String),

    #[error("quadratic irrationals over different fields (sqrt {0} vs sqrt {1})")]
    UnsupportedField(u64, u64),

    #[error("invalid rotation parameters: {0}")]
    InvalidRotation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("steering letter {letter} has no generator (only {sources} sources)")]
    AlphabetMismatch { letter: u8, sources: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { need: u64, got: u64 },

    #[error("spec parse error at byte {position}: {message} (expected {expected})")]
    Parse {
        position: usize,
        message: String,
        expected: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
