use thiserror::Error;

/// Errors raised while building groups or evaluating the block/counting machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed group spec: {0}")]
    MalformedSpec(String),

    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),

    #[error("group order exceeds cap of {cap} elements")]
    OrderCapExceeded { cap: usize },

    #[error("permutation degree {degree} exceeds cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("cayley table violates group axioms: {0}")]
    GroupAxiom(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} does not divide the group order {order}")]
    PrimeNotDivisor { p: u64, order: usize },

    #[error("primes must be distinct (repeated {0})")]
    DuplicatePrime(u64),

    #[error("at least one prime is required")]
    NoPrimes,

    #[error("element {element} is not a {p}-element")]
    NotPElement { element: usize, p: u64 },

    #[error("element {element} is not central in any Sylow {p}-subgroup")]
    NotCentralInSylow { element: usize, p: u64 },

    #[error("subset is not a union of conjugacy classes")]
    NotClassClosed,

    #[error("cyclotomic moduli differ ({0} vs {1})")]
    ModulusMismatch(u32, u32),

    #[error("galois exponent {k} is not coprime to {e}")]
    NotCoprime { k: i64, e: u32 },

    #[error("cyclotomic integer is not divisible by {0}")]
    InexactDivision(String),

    #[error("no suitable prime modulus below {0}")]
    ModulusSearchExhausted(u64),

    #[error("brute-force budget exceeded: {needed} iterations > {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("character table inconsistency: {0}")]
    TableInconsistent(String),

    #[error("character table import rejected: {0}")]
    TableImport(String),

    #[error("counting methods disagree: {0}")]
    MethodMismatch(String),

    #[error("non-integral count from character formula at class {0}")]
    NonIntegralCount(usize),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
