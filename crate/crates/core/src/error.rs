use thiserror::Error;

use crate::linalg::PsdReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order {0}: must be at least 1")]
    InvalidOrder(usize),

    #[error("table for parameter {n} exceeds the size guard (max {max})")]
    TableTooLarge { n: usize, max: usize },

    #[error("group axiom violated ({axiom}) at witness {witness:?}")]
    AxiomViolation {
        axiom: &'static str,
        witness: Vec<usize>,
    },

    #[error("element index {index} out of range for group of order {order}")]
    InvalidElement { index: usize, order: usize },

    #[error("map is not a homomorphism: phi({s}*{t}) != phi({s})*phi({t})")]
    NotHomomorphism { s: usize, t: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds {threshold:e}")]
    NotHermitian { deviation: f64, threshold: f64 },

    #[error("matrix is indefinite: minimum eigenvalue {}", .0.min_eigenvalue)]
    Indefinite(Box<PsdReport>),

    #[error("operator is not a contraction: norm {norm}")]
    NotContraction { norm: f64 },

    #[error("function is not symmetric: T(s^-1) != T(s)* at s = {element} (violation {violation:e})")]
    NotSymmetric { element: usize, violation: f64 },

    #[error("singular operator: {0}")]
    Singular(String),

    #[error("members {i} and {j} do not commute: commutator norm {norm:e}")]
    NonCommuting { i: usize, j: usize, norm: f64 },

    #[error("member {index} is not normal: defect {defect:e}")]
    NonNormal { index: usize, defect: f64 },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("dilation construction failed: {what} residual {residual:e}")]
    Construction { what: &'static str, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigenvalue {distance:e} away from the nearest root of unity")]
    Snapping { distance: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}
