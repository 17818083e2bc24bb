use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape {0:?}: extents must be positive and rank at least 1")]
    InvalidShape(Vec<usize>),
    #[error("expected {expected} digits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("digit {0} is not in Z3")]
    InvalidDigit(u8),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("expected a vector of length {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("dimension {dim} out of range for rank {rank}")]
    DimensionOutOfRange { dim: usize, rank: usize },
    #[error("invalid dimension permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("periodic autocorrelation needs a sequence, got shape {0:?}")]
    NotASequence(Vec<usize>),
    #[error("member selector {0} is not in 0..3")]
    InvalidMember(usize),
    #[error("invalid projection ({k}, {l}) for rank {rank}")]
    InvalidProjection { k: usize, l: usize, rank: usize },
    #[error("factor {factor} does not divide extent {extent}")]
    NotDivisible { factor: usize, extent: usize },
    #[error("length {0} is outside the supported range {1}")]
    UnsupportedLength(usize, &'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("catalog for shape {0:?} is missing or incomplete")]
    IncompleteCatalog(Vec<usize>),
    #[error("shape {shape:?} has product {product} above budget {budget}")]
    BudgetExceeded { shape: Vec<usize>, product: usize, budget: usize },
    #[error("seed {0} does not match any class in the catalog")]
    UnknownSeed(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}
