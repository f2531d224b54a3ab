use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization budget of {budget} operations exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("index {index} outside 1..={depth}")]
    OutOfRange { index: usize, depth: usize },

    #[error("leaf has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("node {node} is moved by the automorphism")]
    NodeMoved { node: String },

    #[error("subgroup is trivial")]
    TrivialSubgroup,

    #[error("element is not in the commutator subgroup")]
    NotInCommutator,

    /// The basepoint lies in the post-critical orbit: `c_{n,alpha} = 0`.
    #[error("degenerate pair: adjusted orbit value c_{index} vanishes")]
    Degenerate { index: usize },

    #[error("zero has no square class")]
    Zero,

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("constant term has negative valuation at {0}")]
    NonIntegral(String),

    #[error("invalid quadratic field: {0}")]
    BadField(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no good primes supplied")]
    NoGoodPrimes,

    #[error("parse error: {0}")]
    Parse(String),
}
