use thiserror::Error;

use crate::algebra::GroupId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is an adjoint representation; tangent vectors are parameterized by the base group")]
    AdjointGroupNotSupported(GroupId),

    #[error("matrix is singular or too ill-conditioned to invert (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("unknown coefficient family `{0}`")]
    UnknownFamily(String),

    #[error("index {index} out of range for {what} (valid: 0..={max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("{group} has no closed-form left Jacobian; use the quadrature path")]
    NotImplementedClosedForm { group: GroupId },

    #[error("series did not converge within {max_terms} terms (last term norm {last_term:e})")]
    SeriesNotConverged { max_terms: usize, last_term: f64 },

    #[error("no minimal polynomial is stated for the {0} algebra")]
    UnsupportedAlgebra(GroupId),

    #[error("exact arithmetic bound exceeded: m + n = {sum} > {bound}")]
    Overflow { sum: usize, bound: usize },

    #[error("unknown check suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("{group} expects {expected} coordinates laid out as {layout}, got {got}")]
    LayoutMismatch {
        group: GroupId,
        expected: usize,
        got: usize,
        layout: &'static str,
    },

    #[error("group mismatch: expected {expected}, got {got}")]
    GroupMismatch { expected: GroupId, got: GroupId },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
