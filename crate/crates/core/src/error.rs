use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an admissible prime")]
    NotPrime(u32),
    #[error("not a subspace")]
    NotASubspace,
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("bad word: {0}")]
    BadWord(String),
    #[error("order cap: {order} exceeds {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("dimension cap: {dim} exceeds {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("not a group table: {0}")]
    NotAGroup(String),
    #[error("not normal")]
    NotNormal,
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("not a homomorphism: f({0}*{1}) differs from f({0})*f({1})")]
    NotAHomomorphism(u32, u32),
    #[error("not automorphism")]
    NotAutomorphism,
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("not W-valued at element {0}")]
    NotWValued(u32),
    #[error("no embedding found")]
    NoEmbedding,
    #[error("not elementary abelian")]
    NotElementaryAbelian,
    #[error("not centralized by the kernel")]
    NotCentralized,
    #[error("not a submodule for the requested side")]
    NotASubmodule,
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("abelian input: no special subgroups to search")]
    Abelian,
    #[error("fingerprint mismatch")]
    FingerprintMismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
