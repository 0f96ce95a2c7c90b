use thiserror::Error;

/// Errors raised by the library. Validation problems with an instance are
/// reported separately as [`crate::affine_base::Violation`] values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid denominator {0}")]
    InvalidDenominator(i64),

    #[error("invalid degree range: d1 = {d1}, d2 = {d2}")]
    InvalidRange { d1: i64, d2: i64 },

    #[error("index (a = {a}, i = {i}) is not admissible for denominator {d}")]
    Inadmissible { a: i64, i: i64, d: i64 },

    #[error("morphisms are not composable: first ends at L({first_end}), second starts at L({second_start})")]
    NotComposable { first_end: i64, second_start: i64 },

    #[error("product output q({a},{i}) at denominator {d} lies outside the instance")]
    OutputNotAdmissible { a: i64, i: i64, d: i64 },

    #[error(
        "triangle cross-section endpoint {0} is a half-integer; critical heights are not generic"
    )]
    NonGeneric(String),

    #[error("delta sequence has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0} is not a positive multiple of the wrapping step {1}")]
    BadWrapLevel(i64, i64),

    #[error("index (a = {a}, i = {i}, d = {d}) is not valid for case {case}")]
    InvalidWrappedIndex { a: i64, i: i64, d: i64, case: char },

    #[error("window too small: output q({a},{i}) at d = {d} falls outside the window")]
    WindowTooSmall { a: i64, i: i64, d: i64 },

    #[error("quadrature did not reach tolerance {tol:e} after {evaluations} evaluations (last change {last_change:e})")]
    QuadratureNotConverged {
        tol: f64,
        evaluations: usize,
        last_change: f64,
    },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("invalid numeric argument: {0}")]
    Domain(String),

    #[error("singular change-of-basis system at degree {0}")]
    SingularBasis(u32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
