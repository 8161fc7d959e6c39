use thiserror::Error;

/// Errors raised by transforms, problem instances and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    /// A height or scale argument that must be strictly positive was not.
    #[error("{what} must be strictly positive, got {value}")]
    Domain { what: &'static str, value: f64 },

    /// The perspective `v -> v f(y/v)` decreased between `v1 < v2`.
    #[error("perspective decreases along y = {y:?}: f^p(y, {v1}) = {p1} > f^p(y, {v2}) = {p2}")]
    RadialityViolation {
        y: Vec<f64>,
        v1: f64,
        v2: f64,
        p1: f64,
        p2: f64,
    },

    /// The strict radiality denominator `(grad f(x), -1)^T (x, f(x))` is not negative.
    #[error("radial derivative formula is singular at x = {x:?} (denominator {denominator})")]
    Singularity { x: Vec<f64>, denominator: f64 },

    /// The quadratic closed-form dual has a vanishing discriminant at the active piece.
    #[error("quadratic dual piece is not differentiable at a zero discriminant")]
    BoundarySubgradient,

    /// The objective has no finite positive value where one is required.
    #[error("no finite positive value: {0}")]
    NoFiniteValue(String),

    /// A supgradient or Hessian oracle was required but the objective does not provide it.
    #[error("missing oracle: {0}")]
    MissingOracle(&'static str),

    /// Translation anchor does not satisfy `f(x0) > u0`.
    #[error("invalid anchor: f(x0) = {value} is not above u0 = {u0}")]
    InvalidAnchor { value: f64, u0: f64 },

    #[error("empty sample set")]
    EmptySamples,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Invalid solver or instance configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Dykstra's projection did not converge within its cycle budget.
    #[error("projection did not converge after {cycles} cycles")]
    ProjectionFailure { cycles: usize },

    /// The linear minimization oracle failed.
    #[error("linear oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, RadialError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(RadialError::DimensionMismatch { expected, found })
    }
}
