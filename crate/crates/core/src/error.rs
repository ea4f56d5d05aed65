use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("slot count mismatch: {left} vs {right}")]
    SlotMismatch { left: usize, right: usize },
    #[error("slot {slot} out of range for a class on {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },
    #[error("expected a correspondence on 2 slots, got {0}")]
    NotCorrespondence(usize),
    #[error("word of length {word} does not match class on {slots} slots")]
    ArityMismatch { word: usize, slots: usize },
    #[error("diagonal classes do not decompose in chow mode")]
    ChowMode,
    #[error("gram matrix is singular")]
    SingularGram,
    #[error("gram matrix is not symmetric")]
    AsymmetricGram,
    #[error("inhomogeneous correspondence (degrees {0:?})")]
    Inhomogeneous(Vec<usize>),
    #[error("isotropic class: (a,a) = 0 at n = {0}")]
    Isotropic(usize),
    #[error("incompatible gradings: {0}")]
    Grading(String),
    #[error("ambient spaces differ")]
    AmbientMismatch,
    #[error("invalid model: {0}")]
    Model(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
