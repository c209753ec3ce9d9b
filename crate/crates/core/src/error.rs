use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter x{index} is outside an alphabet of rank {rank}")]
    InvalidLetter { index: usize, rank: usize },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },

    #[error("alphabet mismatch: expected rank {expected}, found rank {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for a tuple of length {len}")]
    BadIndex { index: usize, len: usize },

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("move sequence is not regular: T3 at position {0}")]
    NotRegular(usize),

    #[error("generating tuple is not Nielsen reduced")]
    NotNielsenReduced,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid Whitehead move: {0}")]
    InvalidWhitehead(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("symbol {symbol:?} at position {pos} is not in the plaintext alphabet")]
    Encoding { symbol: char, pos: usize },

    #[error("decryption failed at unit {unit}")]
    DecryptionFailure { unit: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("matrix determinant is {0}, expected 1")]
    DeterminantNotOne(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("size cap exceeded: {required} required, cap is {cap}")]
    CapExceeded { required: String, cap: String },

    #[error("exponent {n} exceeds the configured limit {limit}")]
    ExponentLimit { n: u64, limit: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
