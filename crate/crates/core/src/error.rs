use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("invalid generator name `{0}` (expected a letter followed by letters or digits)")]
    InvalidGeneratorName(String),

    #[error("generator index {index} is outside an alphabet of size {size}")]
    GeneratorOutOfRange { index: usize, size: usize },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("relator {index} reduces to the identity")]
    EmptyRelator { index: usize },

    #[error("no image given for generator `{0}`")]
    MissingImage(String),

    #[error("class index must be at least 2, got {0}")]
    InvalidClass(usize),

    #[error("coset limit of {limit} exceeded; enumeration is inconclusive")]
    CosetLimit { limit: usize },

    #[error("coset table is not closed")]
    TableNotClosed,

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix rows have unequal length")]
    Ragged,

    #[error("the map is not a homomorphism: relator {relator} has image {image} mod {modulus}")]
    NotHomomorphism { relator: usize, image: i64, modulus: i64 },

    #[error("claim violated: {0}")]
    ClaimViolation(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("search space exceeded the cap of {cap} candidate trees")]
    SearchOverflow { cap: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    /// Resource exhaustion says nothing about the mathematics.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::CosetLimit { .. } | Error::SearchOverflow { .. })
    }
}
