use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong inside the calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate linear-fractional map: ad - bc = 0")]
    Degenerate,
    #[error("pole at z = {0}")]
    PoleAt(Complex64),
    #[error("map has a pole in the closed unit disk")]
    PoleInDisk,
    #[error("map is not parabolic")]
    NotParabolic,
    #[error("map is an automorphism of the disk")]
    Automorphism,
    #[error("map is not a self-map of the disk")]
    NotSelfMap,
    #[error("no boundary contact")]
    NoBoundaryContact,
    #[error("contact point is fixed (zeta = eta); the quotient calculus needs zeta != eta")]
    FixedContact,
    #[error("operands belong to different algebras (contact data differ)")]
    ContactMismatch,
    #[error("element is not central")]
    NotCentral,
    #[error("{slot}-part is outside the generator ring")]
    NotInGeneratorRing { slot: &'static str },
    #[error("half-polynomial must vanish at t = 0")]
    NonzeroAtOrigin,
    #[error("invalid point of the maximal ideal space: {0}")]
    InvalidPoint(String),
    #[error("syntax error at offset {position}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("window {window} exceeds half the truncation size {n}")]
    WindowTooLarge { window: usize, n: usize },
    #[error("compression is not self-adjoint (deviation {0:e})")]
    NotSelfAdjoint(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
