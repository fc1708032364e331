use thiserror::Error;

/// Errors surfaced by ring/module construction and the bounded searches.
///
/// Caps are configuration (see [`crate::config::Caps`]); hitting one is an
/// explicit error, never silent truncation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("ring axiom `{law}` violated at indices ({a}, {b}, {c})")]
    AxiomViolation {
        law: &'static str,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("size limit exceeded: requested {requested}, cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
    #[error("submodule lattice exceeds cap {cap}")]
    LatticeTooLarge { cap: usize },
    #[error("hom space of size {size} exceeds enumeration cap {cap}")]
    HomSpaceTooLarge { size: u128, cap: u128 },
    #[error("injective hull postcondition failed: {0}")]
    HullPostconditionFailure(String),
    #[error("classification chain violated: {0}")]
    ChainViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("ring is not commutative: {0}")]
    NotCommutative(String),
}

pub type Result<T> = std::result::Result<T, Error>;
