use thiserror::Error;

use crate::spectral::CurveClass;

/// Which clause of the normalizability condition failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeFailure {
    /// The λ⁰ coefficient is not the canonical form of the curve.
    WrongHiggsPart,
    /// The λ¹ coefficient has a pole of order greater than one.
    LambdaOnePoleTooDeep { pole_order: i64 },
    /// The λ¹ residue is not −1/2.
    LambdaOneResidue { residue: String },
    /// A λⁱ coefficient with i ≥ 2 has nonzero residue.
    HigherResidue {
        lambda_order: usize,
        residue: String,
    },
}

impl std::fmt::Display for NormalizeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormalizeFailure::WrongHiggsPart => {
                write!(f, "λ⁰ coefficient differs from the canonical form")
            }
            NormalizeFailure::LambdaOnePoleTooDeep { pole_order } => {
                write!(
                    f,
                    "λ¹ coefficient has a pole of order {pole_order} (at most 1 allowed)"
                )
            }
            NormalizeFailure::LambdaOneResidue { residue } => {
                write!(f, "λ¹ residue is {residue}, expected -1/2")
            }
            NormalizeFailure::HigherResidue {
                lambda_order,
                residue,
            } => {
                write!(f, "λ^{lambda_order} residue is {residue}, expected 0")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("coefficient (λ^{lambda_exp}, x^{x_exp}) lies outside the truncation window")]
    OutsideWindow { lambda_exp: usize, x_exp: i64 },
    #[error("series live on different charts")]
    ChartMismatch,
    #[error("pole order {needed} exceeds the pole cap {cap}")]
    PoleCapExceeded { needed: i64, cap: i64 },
    #[error("series is not a unit: its λ⁰ part vanishes within the window")]
    NotAUnit,
    #[error("nonzero residue at λ-order {lambda_order}; no primitive exists")]
    ResidueObstruction { lambda_order: usize },
    #[error("exponential needs a λ⁰ part of positive valuation")]
    NotTopologicallyNilpotent,
    #[error("logarithm needs leading constant 1, found {0}")]
    NonRationalLogarithm(String),
    #[error("ill-formed substitution: {0}")]
    IllFormedSubstitution(String),
    #[error("series does not have a simple zero at the origin")]
    NotSimpleZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("expected a {expected:?} spectral curve, found {found:?}")]
    WrongCurveClass {
        expected: CurveClass,
        found: CurveClass,
    },
    #[error("invalid spectral curve: {0}")]
    InvalidCurve(String),
    #[error("λ⁰ trace/determinant do not match the spectral curve")]
    CurveMismatch,
    #[error("matrix is not invertible: its λ⁰ determinant vanishes")]
    NotInvertible,
    #[error("matrix is not regular")]
    NotRegular,
    #[error("matrix does not commute with the regular element")]
    NotInCommutant,
    #[error("eigenvalue splitting is irrational: {0}")]
    IrrationalSplitting(String),
    #[error("eigenvalues coincide within the window")]
    NotSemisimple,
    #[error("eigenvalue separation is not a unit of the Taylor ring")]
    SeparationNotUnit,
    #[error("matrix connection is not integral")]
    NotIntegral,
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("not normalizable: {0}")]
    NonNormalizable(NormalizeFailure),
    #[error("no integral lattice: obstruction at λ-order {lambda_order} ({reason})")]
    NoLattice { lambda_order: usize, reason: String },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Mathematical,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidTruncation(_)
            | Error::OutsideWindow { .. }
            | Error::ChartMismatch
            | Error::InvalidCurve(_)
            | Error::CurveMismatch
            | Error::NotIntegral
            | Error::Parse(_) => ErrorKind::Validation,
            Error::PoleCapExceeded { .. } | Error::InsufficientPrecision(_) => ErrorKind::Resource,
            _ => ErrorKind::Mathematical,
        }
    }
}
