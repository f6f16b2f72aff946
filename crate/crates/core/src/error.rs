use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial has no coefficients")]
    Empty,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("operation requires a nonconstant polynomial")]
    Constant,
    #[error("derivative of a constant is the degenerate zero polynomial")]
    DegenerateDerivative,
    #[error("root finder failed: worst residual {residual:e} after {iterations} iterations")]
    RootsNotConverged { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("disk radius k = {0} is outside (0, 1]")]
    RadiusOutOfRange(f64),
    #[error("zero {index} has modulus {modulus} > k = {k}")]
    ZeroOutsideDisk { index: usize, modulus: f64, k: f64 },
    #[error("gap mu = {mu} is outside [1, {degree}]")]
    MuOutOfRange { mu: usize, degree: usize },
    #[error("expansion has gap {actual} < declared mu = {declared}")]
    GapViolated { declared: usize, actual: usize },
    #[error("coefficients disagree with the declared zeros (mismatch {mismatch:e})")]
    ZerosMismatch { mismatch: f64 },
    #[error("degree {poly} differs from zero count {zeros}")]
    DegreeMismatch { poly: usize, zeros: usize },
}

/// Reason a checker refused to issue a certificate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("precondition violated: {0}")]
    Precondition(String),
}
