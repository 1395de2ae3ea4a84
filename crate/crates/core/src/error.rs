//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonMonotone: instant {index} is not strictly greater than its predecessor")]
    NonMonotone { index: usize },

    #[error("IndexOutOfRange: index {index} outside window of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("TooShort: a time scale needs at least 2 instants, got {len}")]
    TooShort { len: usize },

    #[error("BoundaryIndex: index {index} has no neighbour inside the window")]
    BoundaryIndex { index: usize },

    #[error("InvalidStep: step must be positive and finite, got {step}")]
    InvalidStep { step: f64 },

    #[error("OrderZeroOrNegative: derivative order must be >= 1, got {order}")]
    OrderZeroOrNegative { order: i64 },

    #[error("WindowTooSmall: {0}")]
    WindowTooSmall(String),

    #[error("SupportTouchesBoundary: support [{lo}, {hi}] reaches the window edge")]
    SupportTouchesBoundary { lo: usize, hi: usize },

    #[error("ReversedInterval: a = {a} > b = {b}")]
    ReversedInterval { a: usize, b: usize },

    #[error("PoleHit: a factor vanishes at s = {s}")]
    PoleHit { s: Complex64 },

    #[error("ContourInvalid: {0}")]
    ContourInvalid(String),

    #[error("ImproperRational: numerator degree {num} >= denominator degree {den}")]
    ImproperRational { num: usize, den: usize },

    #[error("PoleOnScale: pole {pole} coincides with a reciprocal graininess")]
    PoleOnScale { pole: Complex64 },

    #[error("UntaggedPole: pole {pole} has no region-of-convergence tag")]
    UntaggedPole { pole: Complex64 },

    #[error("DegenerateDenominator: {0}")]
    DegenerateDenominator(String),

    #[error("SingularStep: the recursion cannot be solved at index {index}")]
    SingularStep { index: usize },

    #[error("ScaleMismatch: {0}")]
    ScaleMismatch(String),

    #[error("NotShiftClosed: {0}")]
    NotShiftClosed(String),

    #[error("TargetOffSuperScale: {target} is not a difference of two instants")]
    TargetOffSuperScale { target: f64 },

    #[error("ReflectionOffGrid: {0}")]
    ReflectionOffGrid(String),

    #[error("IncompatibleStep: {0}")]
    IncompatibleStep(String),

    #[error("RepeatedGraininess: steps {first} and {second} are not separated")]
    RepeatedGraininess { first: usize, second: usize },

    #[error("InvalidSignal: {0}")]
    InvalidSignal(String),

    #[error("Parse: {0}")]
    Parse(String),

    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
