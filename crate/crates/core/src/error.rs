use thiserror::Error;

use crate::codeword::Codeword;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("code does not contain the empty codeword")]
    MissingEmptyCodeword,
    #[error("neuron index {index} outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{0} neurons exceeds the supported maximum of {max}", max = Codeword::MAX_NEURONS)]
    TooManyNeurons(usize),
    #[error("{0} is not a codeword of the code")]
    NotACodeword(Codeword),
    #[error("member set is not a trunk of the code")]
    NotATrunk,
    #[error("trunk {0} is empty or is the whole code, so it is not a proper trunk")]
    NotAProperTrunk(usize),
    #[error("trunk belongs to a different code")]
    ForeignTrunk,
    #[error("map is undefined on codeword {0}")]
    NotTotal(Codeword),
    #[error("map sends a codeword to {0}, which is outside the target code")]
    ValueOutsideTarget(Codeword),
    #[error("map is not a morphism of neural codes")]
    NotAMorphism,
    #[error("morphism is not surjective onto the given target")]
    NotSurjective,
    #[error("morphisms do not share a source code")]
    SourceMismatch,
    #[error("search exceeded its budget of {0} steps")]
    CapExceeded(u64),
    #[error("neuron {0} is trivial")]
    TrivialNeuron(usize),
    #[error("host code is not intersection-complete")]
    HostNotIntersectionComplete,
    #[error("isolated subset does not live in the intersection-completion of the base code")]
    HostMismatch,
    #[error("{0} is not a subset of the host code")]
    NotASubset(Codeword),
    #[error("covering type {0} is not applicable to this isolated subset")]
    TypeNotApplicable(u8),
    #[error("covering type must be 1, 2, 3 or 4, got {0}")]
    UnknownCoverType(u8),
    #[error("construction drops the empty codeword")]
    InvalidCover,
    #[error("box has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("box is empty along axis {0}")]
    EmptyBox(usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
