use thiserror::Error;

use crate::jet::Trunc;

/// Failures of the series layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum JetError {
    #[error("truncation mismatch: ({},{}) vs ({},{})", left.d, left.e, right.d, right.e)]
    TruncMismatch { left: Trunc, right: Trunc },
    #[error("monomial {powers:?} exceeds truncation (d={}, e={})", trunc.d, trunc.e)]
    DegreeOverflow { powers: [u32; 4], trunc: Trunc },
    #[error("series is not invertible: zero constant term")]
    NotInvertible,
    #[error("coordinate change has a singular linear part")]
    SingularChange,
    #[error("degree overflow: forms of degree {0} and {1} cannot be wedged in dimension 3")]
    FormDegree(u8, u8),
    #[error("exterior derivative of a 3-form is not defined here")]
    TopDegree,
    #[error("operation expects {expected}, got {got}")]
    WrongKind { expected: &'static str, got: &'static str },
}

/// Domain errors surfaced by the higher layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("Jacobi identity fails; residual {residual}")]
    NotPoisson { residual: String },
    #[error("1-form is not integrable; residual {residual}")]
    NotIntegrable { residual: String },
    #[error("df^dg does not vanish; residual {residual}")]
    Dependency { residual: String },
    #[error("not a singular point: P does not vanish there")]
    NotSingular,
    #[error("1-jet is zero: outside the taxonomy")]
    ZeroOneJet,
    #[error("1-jet isomorphic to {{y,z}}=y, {{z,x}}=-x, {{x,y}}=0: the (f, g) normal form does not apply")]
    OneOneJet,
    #[error("no coordinate pair a, b with independent c = P(da, db) found")]
    NoZFormPair,
    #[error("not a V singularity: {0}")]
    NotV(String),
    #[error("not an N singularity: {0}")]
    NotN(String),
    #[error("not an A singularity: {0}")]
    NotA(String),
    #[error("not algebraically isolated at degree {degree}")]
    NotIsolated { degree: u32 },
    #[error("insufficient truncation degree: {0}")]
    InsufficientDegree(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
