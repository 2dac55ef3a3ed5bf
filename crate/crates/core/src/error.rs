use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("degenerate arguments: {0}")]
    DegenerateArguments(String),
    #[error("coefficient {0} is not an integer in integer mode")]
    NonIntegerCoefficient(String),
    #[error("formal sums live over different variable sets or fields")]
    IncompatibleSums,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error("constant {0} has a prime factor beyond the trial-division bound")]
    OversizedConstant(String),
    #[error("unknown basis element {0}")]
    UnknownBasisElement(String),
    #[error("expected a univariate element")]
    NotUnivariate,
    #[error("variables are not declared in conjugate pairs: {0}")]
    UnpairedVariables(String),
    #[error("tame symbol needs integer coefficients")]
    NonIntegralCoefficient,
    #[error("zero is not an element of the multiplicative group")]
    ZeroFactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecializeError {
    #[error("invalid specialization step: {0}")]
    InvalidStep(String),
    #[error("point not admissible: {0}")]
    PointNotAdmissible(String),
    #[error(transparent)]
    Sum(#[from] SumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("non-finite value")]
    NonFinite,
    #[error("dilogarithm argument {0} is 0 or 1")]
    DegenerateArgument(String),
    #[error("could not find admissible sample points after {0} attempts")]
    SamplingExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("argument outside the disc of convergence (valuation {0})")]
    OutOfDisc(i64),
    #[error("division by a p-adic zero")]
    DivisionByZero,
    #[error("generator {0} vanishes at the evaluation point")]
    GeneratorVanishesAtPoint(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} does not take a rational value at the point")]
    NonRationalValue(String),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlochError {
    #[error("prime {0} is too small (need p >= 5)")]
    PrimeTooSmall(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown variable `{name}` at {line}:{column}")]
    UnknownVariable { name: String, line: usize, column: usize },
    #[error("division by zero at {line}:{column}")]
    DivisionByZeroConstant { line: usize, column: usize },
    #[error("document error at line {line}: {message}")]
    Document { line: usize, message: String },
}
