use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("integration left the chart near ({x:.6}, {y:.6})")]
    ChartExit { x: f64, y: f64 },
    #[error("adaptive integrator could not meet tolerance (step {step:e} at s = {at})")]
    StepFailure { step: f64, at: f64 },
    #[error("{what} did not converge within {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("boundary angle did not stabilize before arc length {cutoff}")]
    NoStabilization { cutoff: f64 },
    #[error("tau fit residual {residual:e} exceeds tolerance {tolerance:e}")]
    FitFailure { residual: f64, tolerance: f64 },
    #[error("tangent vectors do not span a plane")]
    DegenerateSpan,
    #[error("immersion is rank deficient (min singular value {sigma:e})")]
    RankDeficient { sigma: f64 },
    #[error("curve is not unit speed (speed {speed})")]
    NotUnitSpeed { speed: f64 },
    #[error("plane is close to tangent to the surface (min gradient {min_gradient:e})")]
    TangencySuspected { min_gradient: f64 },
    #[error("tilt classification changed when the window was doubled")]
    WindowTooSmall,
    #[error("surface extent is too small to estimate its ideal boundary")]
    InsufficientExtent,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("expression error: {0}")]
    Expression(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
