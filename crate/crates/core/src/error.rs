use thiserror::Error;

/// Errors produced by algebra, state and measurement operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible shapes: {0} vs {1}")]
    ShapeMismatch(String, String),

    #[error("element is not Hermitian (defect {defect:.3e}, tol {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("element is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("element is not a projection (defect {0:.3e})")]
    NotProjection(f64),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("reduction undefined: ρ(Y†Y) = {0:.3e} is below the dust threshold")]
    UndefinedReduction(f64),

    #[error("elements do not commute (defect {defect:.3e} exceeds {tol:.3e}); no joint distribution exists")]
    NonCommuting { defect: f64, tol: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid completely positive map: {0}")]
    InvalidMap(String),

    #[error("measurement setup is biased: ‖M(Y) − X‖ = {defect:.3e} exceeds {tol:.3e}")]
    Biased { defect: f64, tol: f64 },

    #[error("pointer gap |y1 − y2| = {0:.3e} is below the gap threshold; bound is vacuous")]
    DegenerateGap(f64),

    #[error("state is not a vector state (second eigenvalue {0:.3e})")]
    NotVectorState(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dense realization of dimension {required} exceeds the size guard {guard}")]
    SizeGuard { required: usize, guard: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
