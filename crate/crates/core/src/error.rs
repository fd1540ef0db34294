use thiserror::Error;

/// Errors raised by graph construction, lex arithmetic, Steiner operations
/// and the verification engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EipError {
    #[error("invalid parameters n={n}, m={m}: {reason}")]
    InvalidParams { n: u32, m: u32, reason: String },

    #[error("vertex {0:?} does not belong to the graph")]
    InvalidVertex(Vec<u8>),

    #[error("dimension mismatch: expected {expected} digits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lex rank {rank} out of range 1..={max}")]
    RankOutOfRange { rank: u64, max: u64 },

    #[error("ell = {ell} out of range 0..={max}")]
    EllOutOfRange { ell: u64, max: u64 },

    #[error("ordering violated: need {lo} <= {hi}")]
    Ordering { lo: u64, hi: u64 },

    #[error("invalid decoration s={s}, t={t} for m={m}")]
    InvalidDecoration { s: u32, t: u32, m: u32 },

    #[error("copy index {h} out of range for m={m}")]
    InvalidCopy { h: u32, m: u32 },

    #[error("instance too large: {what} ({size} > cap {cap})")]
    TooLarge {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("vertex set is not compressed")]
    NotCompressed,

    #[error("subadditivation does not apply: h_min={h_min} >= h_max={h_max}")]
    AlreadyCanonical { h_min: u32, h_max: u32 },

    #[error("compression did not stabilize within {0} cycles")]
    IterationBound(u64),

    #[error("no corner-term branch matches the direct boundary oracle")]
    BranchSelection,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, EipError>;
