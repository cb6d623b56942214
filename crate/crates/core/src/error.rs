use thiserror::Error;

use crate::steering_three::TripleAssessment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid Bell-diagonal state: probability p{label} = {value} is negative")]
    InvalidState { label: &'static str, value: f64 },

    #[error("invalid Bell-diagonal state: |t{index}| = {value} exceeds 1")]
    CorrelationOutOfRange { index: usize, value: f64 },

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("direction has norm {norm}, expected a unit vector")]
    NotUnit { norm: f64 },

    #[error("observable Bloch vector has norm {norm} > 1")]
    NotAnObservable { norm: f64 },

    #[error("third observable is not orthogonal to the first two (overlaps {overlap1:e}, {overlap2:e})")]
    NotOrthogonal { overlap1: f64, overlap2: f64 },

    #[error("Fermat-Toricelli solver did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        partial: Box<TripleAssessment>,
    },

    #[error("parent-POVM search is inconclusive within {margin:e} of the compatibility boundary")]
    BoundaryInconclusive { margin: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
