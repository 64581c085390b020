//! Prime-field arithmetic, Reed–Solomon encoding, code concatenation and
//! exhaustive distance measurement.
//!
//! Symbols are `u32`. Only prime fields are supported; alphabets of composite
//! size (for example the inner alphabet `Σ^r` of a concatenated code) appear
//! only through materialized [`Codebook`]s.

mod codebook;
mod field;
mod reed_solomon;

pub use codebook::{concat_encode, enumerate_codebook, min_relative_distance, Codebook};
pub use field::{field_arith, FieldOp, PrimeField};
pub use reed_solomon::{rs_encode, CodeSpec};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{value} is not an element of GF({modulus})")]
    NotInField { value: u64, modulus: u32 },
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("operation {op:?} takes {expected} operands, got {found}")]
    Arity {
        op: FieldOp,
        expected: usize,
        found: usize,
    },
    #[error("code parameters must satisfy 1 <= r <= m <= p (got r={r}, m={m}, p={p})")]
    InvalidLengths { r: usize, m: usize, p: u32 },
    #[error("evaluation point list has {found} entries, expected {expected}")]
    EvalPointCount { expected: usize, found: usize },
    #[error("evaluation point {0} is repeated")]
    RepeatedEvalPoint(u32),
    #[error("message has length {found}, expected {expected}")]
    MessageLength { expected: usize, found: usize },
    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: u64 },
    #[error("inner alphabet has size {inner}, but the outer code needs |Σ|^r = {expected}")]
    AlphabetMismatch { inner: u64, expected: u64 },
    #[error("{count} codewords exceed the budget of {limit}")]
    BudgetExceeded { count: u128, limit: u64 },
    #[error("codebook needs {expected} codewords, got {found}")]
    CodewordCount { expected: u128, found: usize },
    #[error("codeword {index} has length {found}, expected {expected}")]
    CodewordLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("codewords {first} and {second} coincide")]
    RepeatedCodeword { first: usize, second: usize },
    #[error("declared relative distance {0} is outside (0, 1]")]
    InvalidDistance(String),
}
