//! Numerical tolerances shared by every operation.
//!
//! Producers (integrators, solvers) run one decade tighter than the
//! consumers (assertions) that read their output.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Local error target of the ODE integrator.
    pub integration: f64,
    /// Geometric assertions (distances, residuals of identities).
    pub geometric: f64,
    /// Angular assertions, radians.
    pub angular: f64,
    /// Curvature identities computed from second derivatives of the metric.
    pub curvature: f64,
    /// Surface quantities built from finite-difference jets.
    pub surface: f64,
    /// Drift of a boundary angle per doubling of arc length.
    pub ideal_drift: f64,
    /// Arc length at which boundary-angle estimation gives up.
    pub ideal_cutoff: f64,
    /// Iteration budget of shooting and minimization solvers.
    pub solver_budget: usize,
    /// Step of central finite differences on metric data.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            integration: 1e-8,
            geometric: 1e-6,
            angular: 1e-4,
            curvature: 1e-4,
            surface: 1e-5,
            ideal_drift: 1e-6,
            ideal_cutoff: 40.0,
            solver_budget: 200,
            fd_step: 1e-5,
        }
    }
}

impl Tolerances {
    /// Scales every assertion tolerance by `factor`; solver settings are kept.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            integration: self.integration * factor,
            geometric: self.geometric * factor,
            angular: self.angular * factor,
            curvature: self.curvature * factor,
            surface: self.surface * factor,
            ideal_drift: self.ideal_drift * factor,
            ..*self
        }
    }
}
