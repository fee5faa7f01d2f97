use serde::Serialize;

use super::{surface_geometry, ImmersedSurface};
use crate::error::Result;
use crate::submersion::SubmersionModel;

/// Per-sample margin `min(k1, k2) − |τ|` over a parameter list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub passes: bool,
    pub worst_margin: f64,
    pub worst_param: [f64; 2],
    pub samples: usize,
    /// Margins at or below this value fail.
    pub tolerance: f64,
}

/// Checks `k_i > |τ|` at every sample. A margin within `tolerance` of zero
/// does not count as positive.
pub fn hypothesis_check(
    model: &SubmersionModel,
    surface: &ImmersedSurface,
    samples: &[[f64; 2]],
    tolerance: f64,
) -> Result<HypothesisReport> {
    use rayon::prelude::*;
    let margins: Vec<(f64, [f64; 2])> = samples
        .par_iter()
        .map(|&u| {
            let g = surface_geometry(model, surface, u)?;
            let tau = model.fit_tau(g.point, 0.0)?.tau;
            Ok((g.k1.min(g.k2) - tau.abs(), u))
        })
        .collect::<Result<_>>()?;
    let (worst_margin, worst_param) = margins
        .iter()
        .copied()
        .fold((f64::INFINITY, [f64::NAN; 2]), |a, b| if b.0 < a.0 { b } else { a });
    Ok(HypothesisReport {
        passes: worst_margin > tolerance,
        worst_margin,
        worst_param,
        samples: samples.len(),
        tolerance,
    })
}
