use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),

    #[error("invalid size {0}: must be at least 1")]
    InvalidSize(usize),

    #[error("expected a {expected}x{expected} grid, row {row} has {found} entries")]
    BadShape {
        expected: usize,
        row: usize,
        found: usize,
    },

    #[error("expected {expected} rows, found {found}")]
    BadRowCount { expected: usize, found: usize },

    /// Cell positions are 1-indexed.
    #[error("diagonal entry ({0},{0}) is nonzero")]
    NonzeroDiagonal(usize),

    /// Cell positions are 1-indexed.
    #[error("entry ({row},{col}) is not the negative of entry ({col},{row}) modulo {modulus}")]
    NotSkewSymmetric {
        row: usize,
        col: usize,
        modulus: u32,
    },

    #[error("vertex {vertex} out of range for size {size}")]
    VertexOutOfRange { vertex: usize, size: usize },

    #[error("length {found} does not match matrix size {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("size {n} is not coprime to modulus {modulus}")]
    NotCoprime { n: usize, modulus: u32 },

    #[error("orbit of size {size} exceeds the enumeration limit {limit}")]
    OrbitTooLarge { size: u128, limit: u128 },

    #[error("search space of size {size} exceeds the enumeration limit {limit}")]
    GuardExceeded { size: u128, limit: u128 },

    #[error("complexes with more than 64 vertices are not supported (got {0})")]
    TooManyVertices(usize),
}

impl Error {
    /// True for errors caused by a resource guard rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::OrbitTooLarge { .. } | Error::GuardExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
