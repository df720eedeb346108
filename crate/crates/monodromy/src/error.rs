use thiserror::Error;

/// Errors raised by the monodromy library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("eps = {eps} is outside the admissible range (0, {max}]")]
    BadEps { eps: f64, max: f64 },

    #[error("invalid loop site: {0}")]
    BadSite(String),

    #[error("no confluence of punctures within tolerance at t = {re} + {im}i")]
    NotACoincidencePoint { re: f64, im: f64 },

    #[error("path passes within {distance:e} of the coincidence point {re} + {im}i")]
    PathThroughCoincidence { distance: f64, re: f64, im: f64 },

    #[error("projection angle {theta} is not generic: {reason}")]
    NonGenericProjection { theta: f64, reason: String },

    #[error("no generic projection angle found after {attempts} attempts")]
    NoGenericProjection { attempts: usize },

    #[error("strand count mismatch: expected {expected}, found {found}")]
    IndexMismatch { expected: usize, found: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },

    #[error("free word exceeded the length cap of {cap} letters")]
    LengthCap { cap: usize },

    #[error("degenerate rotation block: {0}")]
    DegenerateBlock(String),

    #[error("overlapping rotation hulls: {0}")]
    OverlappingHulls(String),

    #[error("s = {re} + {im}i is a pole of the uniformization")]
    PoleAtS { re: f64, im: f64 },

    #[error("could not build a loop around the coincidence point: {0}")]
    LoopConstructionFailed(String),

    #[error("unknown export format '{0}'")]
    UnknownFormat(String),

    #[error("trajectories do not join: {0}")]
    Discontinuous(String),
}

pub type Result<T> = std::result::Result<T, Error>;
