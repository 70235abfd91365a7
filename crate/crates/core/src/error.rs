use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not real")]
    NotReal,
    #[error("element is not in the span of the basis")]
    NotInSpan,
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("sign still undecided at the {bits}-bit precision cap")]
    PrecisionExhausted { bits: u32 },
    #[error("conductor {0} is not supported")]
    BadConductor(u64),
    #[error("line endpoints coincide")]
    DegenerateLine,
    #[error("cell is empty")]
    EmptyCell,
    #[error("cell is unbounded")]
    Unbounded,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("spectral coefficient is not a unit")]
    NotUnit,
    #[error("segment length is not an element of the field")]
    LengthNotInField,
    #[error("codomain of the inner map is not contained in the domain of the outer map")]
    NotComposable,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget of {0} exhausted")]
    BudgetExhausted(usize),
    #[error("identity {identity} fails on atom {atom}")]
    NousViolation { identity: &'static str, atom: usize },
    #[error("construction check failed: {0}")]
    Invariant(String),
    #[error("map has flipped branches")]
    Flips,
}

pub type Result<T> = core::result::Result<T, Error>;
