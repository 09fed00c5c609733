use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is outside the supported range 2..=2^31")]
    InvalidModulus(u64),

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("structure constants have the wrong shape: {0}")]
    ConstantsShape(String),

    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("declared unit fails the unit law at basis index {0}")]
    UnitLaw(usize),

    #[error("operation requires a unital ring")]
    NotUnital,

    #[error("element is not an idempotent")]
    NotIdempotent,

    #[error("idempotents {0} and {1} of the family are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("idempotent family does not sum to the unit")]
    IncompleteFamily,

    #[error("corner ring is not a free Z/{modulus}-module (a pivot of order {order} appeared)")]
    CornerNotFree { modulus: u64, order: u64 },

    #[error("bimodule action is not associative: {0}")]
    BimoduleAction(String),

    #[error("bimodule action is not unital at module basis index {0}")]
    BimoduleNotUnital(usize),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),

    #[error("relation is not transitive: `{0}` ⪯ `{1}` ⪯ `{2}` but not `{0}` ⪯ `{2}`")]
    NotTransitive(String, String, String),

    #[error("unknown class index {0}")]
    UnknownClass(usize),

    #[error("class {0} is not an isolated singleton")]
    NotIsolatedSingleton(usize),

    #[error("map is not a Jordan derivation: {0}")]
    NotJordan(String),

    #[error("ring of rank {required} exceeds the size budget {budget}")]
    SizeBudget { required: usize, budget: usize },
}
