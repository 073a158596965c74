use thiserror::Error;

use crate::rewriter::RewriteTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("element {elem} has {candidates} generalized inverses (need exactly one)")]
    NotInverse { elem: usize, candidates: usize },

    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: usize, f: usize },

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("not in normal form: {0}")]
    NotNormalForm(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("rewriting exceeded {limit} steps")]
    StepLimitExceeded { limit: usize, trace: Box<RewriteTrace> },

    #[error("rewriter disagrees with pair-formula fold: {0}")]
    OracleMismatch(String),

    #[error("map is not a partial homomorphism: {0}")]
    NotPartialHom(String),

    #[error("lifted map is not a homomorphism: {0}")]
    LiftNotHomomorphism(String),

    #[error("property violated: {0}")]
    PropertyViolation(String),

    #[error("partial-homomorphism and dual-prehomomorphism verdicts differ: {0}")]
    EquivalenceViolation(String),

    #[error("partial-action criteria disagree: {0}")]
    CriteriaDisagree(String),

    #[error("not a filter base: {0}")]
    NotFilterBase(String),

    #[error("not a partial action: {0}")]
    NotPartialAction(String),

    #[error("expanded bundle is not saturated: {0}")]
    SaturationFailure(String),

    #[error("regularity data rejected: {0}")]
    RegularityFailure(String),

    #[error("expanded twisted action is not global: {0}")]
    GlobalityFailure(String),

    #[error("subspace is not a *-algebra")]
    NotAnAlgebra,

    #[error("algebra has no unit within tolerance (residual {0:e})")]
    NoUnit(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
