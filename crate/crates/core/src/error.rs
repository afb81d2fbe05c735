use thiserror::Error;

/// Errors raised anywhere in the solving pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },
    #[error("system is not square: {polys} polynomials in {vars} variables")]
    NonSquare { polys: usize, vars: usize },
    #[error("zero polynomial where a nonzero polynomial is required")]
    ZeroPolynomial,
    #[error("degree bound {bound} is smaller than the polynomial degree {degree}")]
    DegreeBound { bound: u32, degree: u32 },
    #[error("nonpositive value where a positive one is required")]
    Nonpositive,
    #[error("interval width target of 2^-{quality} not met and no refinement available")]
    Unrefinable { quality: u32 },
    #[error("linear form has no unit pivot coefficient")]
    InvalidForm,
    #[error("system not zero-dimensional along this direction: {0}")]
    NotZeroDimensional(String),
    #[error("no preimage for projected point {index}")]
    NoPreimage { index: usize },
    #[error("lifting did not resolve point {index} to a unique preimage")]
    AmbiguousPreimage { index: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("system has solutions at infinity")]
    SolutionsAtInfinity,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("root isolation did not converge below {max_precision} bits")]
    NoConvergence { max_precision: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
