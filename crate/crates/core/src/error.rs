use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has length {got}, quiver has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },

    #[error("zero dimension vector not allowed here")]
    ZeroVector,

    #[error("arrow {arrow} is a loop at vertex {vertex}")]
    LoopArrow { arrow: usize, vertex: usize },

    #[error("arrow {arrow} references vertex {vertex}, quiver has {vertex_count}")]
    UnknownVertex { arrow: usize, vertex: usize, vertex_count: usize },

    #[error("quiver must have at least one vertex")]
    EmptyQuiver,

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("extension degree {0} out of range 1..=4")]
    DegreeOutOfRange(u32),

    #[error("field of order {0} is too large for table-driven arithmetic")]
    FieldTooLarge(u64),

    #[error("dimension vector {0:?} is divisible: no generic weight exists")]
    Divisible(Vec<u32>),

    #[error("weight {weight:?} is not generic for {alpha:?}")]
    NotGeneric { weight: Vec<i64>, alpha: Vec<u32> },

    #[error("weight pairs to {value} with the dimension vector, expected 0")]
    Unbalanced { value: i64 },

    #[error("prime {p} divides weight pairing {value} of a proper subvector")]
    BadPrime { p: u32, value: i64 },

    #[error("enumeration of {what} needs {required} items, budget is {budget}")]
    BudgetExceeded { what: &'static str, required: BigUint, budget: u64 },

    #[error("division {numerator} / {denominator} is not exact in {context}")]
    InexactDivision { context: &'static str, numerator: BigUint, denominator: BigUint },

    #[error("no admissible prime powers up to {max_prime} ({found} found, {needed} needed)")]
    NoAdmissiblePrimes { max_prime: u32, found: usize, needed: usize },

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("root multiplicity recursion failed at {beta:?}: {reason}")]
    Recursion { beta: Vec<u32>, reason: String },

    #[error("{0:?} lies outside the table box")]
    OutOfBox(Vec<u32>),

    #[error("negative coefficient {coefficient} at q^{power}: positivity violated")]
    NegativeCoefficient { power: usize, coefficient: String },

    #[error("subspace tuple is not invariant under arrow {arrow}")]
    NotInvariant { arrow: usize },

    #[error("invariant violated: {0}")]
    Internal(String),
}
