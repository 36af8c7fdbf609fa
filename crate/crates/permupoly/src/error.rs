//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} is even; only odd characteristic is supported")]
    EvenModulus(u64),
    #[error("extension degree must be >= 1")]
    ZeroExtensionDegree,
    #[error("field too large: p^(3k) must fit in 63 bits")]
    FieldTooLarge,
    #[error("supplied polynomial for {role} is not monic of degree {degree}")]
    BadModulusShape { role: &'static str, degree: usize },
    #[error("supplied polynomial for {0} is reducible")]
    ReducibleModulus(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("enumeration budget exceeded: need {need}, budget {budget}")]
    BudgetExceeded { need: u64, budget: u64 },
    #[error("cannot parse field spec {0:?}")]
    BadFieldSpec(String),

    #[error("operands built over different variable sets")]
    VarSetMismatch,
    #[error("variable set supports at most 10 variables")]
    TooManyVariables,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("polynomial is constant in {0:?}")]
    ConstantInVariable(String),
    #[error("inexact division (remainder has {remainder_terms} terms)")]
    InexactDivision { remainder_terms: usize },
    #[error("zero polynomial has no content decomposition")]
    ZeroContent,
    #[error("rewrite did not reach a fixpoint within {0} passes")]
    RewriteDiverged(usize),
    #[error("variable {0:?} is unassigned in evaluation")]
    UnassignedVariable(String),
    #[error("pipeline invariant broken: {0}")]
    Pipeline(String),

    #[error("unknown family or theorem id {0:?}")]
    UnknownFamily(String),
    #[error("coefficient set does not match family {family}: {detail}")]
    BadCoefficients { family: &'static str, detail: String },
    #[error("{0}")]
    Precondition(String),
}
