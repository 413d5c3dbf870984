use thiserror::Error;

use crate::arith::Rational;

/// Failures of the exact algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    /// The modulus of the active extension factors as `factor * cofactor`
    /// (both monic, coefficients low to high in gamma).
    #[error("zero divisor in extension: modulus splits off a factor of degree {}", factor.len().saturating_sub(1))]
    ZeroDivisor {
        factor: Vec<Rational>,
        cofactor: Vec<Rational>,
    },
    #[error("only one algebraic extension may be active at a time")]
    NestedExtension,
    #[error("invalid extension modulus: {0}")]
    BadModulus(String),
    #[error("interpolation abscissae are not distinct")]
    DuplicateAbscissa,
    #[error("denominator is not invertible modulo the modulus (gcd of degree {degree})")]
    NotInvertible { degree: usize },
    #[error("substitution entries are not homogeneous of one common degree")]
    InhomogeneousSubstitution,
    #[error("polynomial degree {degree} exceeds homogenization degree {k}")]
    DegreeExceedsK { degree: usize, k: usize },
    #[error("polynomial is not exactly divisible")]
    InexactDivision,
    #[error("gcd input is not homogeneous")]
    InhomogeneousGcdInput,
}

/// Problems with a parametrization as given.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("parametrization has no nonzero entry")]
    AllZero,
    #[error("entry {index} is not homogeneous")]
    InhomogeneousEntry { index: usize },
    #[error("entry {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: u32,
        found: u32,
    },
    #[error("entries share the nonconstant factor {factor}")]
    NotCoprime { factor: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Failures of the cover constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),
    #[error("basis of chart {chart} does not have the expected triangular shape: {reason}")]
    ShapeViolation { chart: usize, reason: String },
    #[error("no suitable coordinate change found after {attempts} attempts")]
    ExhaustedAttempts { attempts: usize },
    #[error("beta for the factor {factor} needs a second algebraic extension")]
    NonLinearBeta { factor: String },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl CoverError {
    /// True when the failure means the input does not meet the hypotheses,
    /// as opposed to an internal algebra problem.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            CoverError::HypothesesNotSatisfied(_)
                | CoverError::ShapeViolation { .. }
                | CoverError::ExhaustedAttempts { .. }
        )
    }
}

/// Failures reported by the certificate checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("composition identity fails for {patch} entry {index}")]
    IdentityFailure { patch: char, index: usize },
    #[error("{patch} has an affine base point; basis {basis}")]
    BasePointFound { patch: char, basis: String },
    #[error("{what} lies off the surface")]
    MembershipFailure { what: String },
    #[error("fixture {what} is not hit")]
    FixtureMiss { what: String },
    #[error("u*r + v*s = {value}, expected 1")]
    BezoutFailure { value: String },
    #[error("line condition fails on the critical lines {modulus} = 0")]
    InfinityAvoidance { modulus: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}
