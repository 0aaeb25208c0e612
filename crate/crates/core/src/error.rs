use thiserror::Error;

/// Errors raised by the library.
///
/// `Undecided` is the only variant that does not signal bad input or a bug:
/// it reports that a seeded search ran out of budget before it could certify
/// an answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields ({0} and {1})")]
    FieldMismatch(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree {degree} exceeds the configured ceiling {ceiling}")]
    DegreeCeiling { degree: usize, ceiling: usize },
    #[error("quiver has a directed cycle through {0:?}")]
    CyclicQuiver(Vec<String>),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails at basis element {0}")]
    UnitLaw(usize),
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("subspace is not a unital subalgebra")]
    NotASubalgebra,
    #[error("radical computation failed: {0}")]
    Radical(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("element is not an idempotent modulo the radical")]
    NotIdempotent,
    #[error("idempotent lifting did not converge")]
    LiftingDiverged,
    #[error("algebra has no path basis")]
    NotPathAlgebra,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds the bound {0}")]
    GroupTooLarge(usize),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("characteristic {characteristic} divides the group order {order}")]
    CharacteristicDividesOrder { characteristic: u64, order: usize },
    #[error("not a subgroup of the acting group")]
    NotASubgroup,
    #[error("groups do not match")]
    GroupMismatch,
    #[error("invalid linearisation: {0}")]
    InvalidLinearisation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("size budget exceeded: {0}")]
    SizeBudget(String),
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;
