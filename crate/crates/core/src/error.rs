use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square and non-empty: got {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("diagonal entry ({0},{0}) must be zero")]
    NonzeroDiagonal(usize),

    #[error("entry ({0},{1}) is negative")]
    NegativeEntry(usize, usize),

    #[error("expected {expected} item names, got {got}")]
    NameCount { expected: usize, got: usize },

    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("the k objective needs an unweighted (0/1) matrix")]
    WeightedMatrix,

    #[error("optimal set is empty")]
    EmptySet,

    #[error("at least {min} items required, got {got}")]
    TooFewItems { min: usize, got: usize },

    #[error("game {game} references item {item} but n = {n}")]
    ItemOutOfRange { game: usize, item: usize, n: usize },

    #[error("game {0} pits an item against itself")]
    SelfGame(usize),

    #[error("game schedule is disconnected; item {0} is unreachable from item 0")]
    Disconnected(usize),

    #[error("linear system is singular")]
    Singular,

    #[error("residual {0:e} exceeds tolerance")]
    Residual(f64),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}
