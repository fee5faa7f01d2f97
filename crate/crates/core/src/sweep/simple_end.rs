use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::classify::{angular_hull, seen_from_basepoint, SweepSettings};
use super::plane::{intersect, VerticalPlane};
use crate::base::{distance, ideal_geodesic, IdealPoint, ModelKind};
use crate::error::{GeomError, Result};
use crate::submersion::SubmersionModel;
use crate::surface::ImmersedSurface;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndProbe {
    pub ends: [f64; 2],
    pub components: usize,
    /// Every component is compact; `None` when the section could not be resolved.
    pub compact: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleEndReport {
    /// False for surfaces declared compact.
    pub applicable: bool,
    pub theta0: Option<f64>,
    /// `(radius, angular spread of the samples at least that far from o)`,
    /// with radii doubling.
    pub shells: Vec<(f64, f64)>,
    pub single_point: bool,
    pub probes: Vec<EndProbe>,
    pub probes_compact: bool,
    pub passes: bool,
}

/// Estimates `∂∞π(Σ)` from the angular spread of far samples and checks
/// that planes over geodesics avoiding the end meet the surface compactly.
pub fn simple_end_test(model: &SubmersionModel, surface: &ImmersedSurface, settings: &SweepSettings) -> Result<SimpleEndReport> {
    if surface.compact {
        return Ok(SimpleEndReport {
            applicable: false,
            theta0: None,
            shells: Vec::new(),
            single_point: false,
            probes: Vec::new(),
            probes_compact: false,
            passes: false,
        });
    }
    let base = model.base();
    let o = base.basepoint();
    let [nu, nv] = surface.node_counts();
    let samples: Vec<(f64, f64)> = (0..nu * nv)
        .into_par_iter()
        .filter_map(|k| {
            let p = surface.point(surface.node(k / nv, k % nv)).ok()?.base();
            if !base.contains(p) {
                return None;
            }
            let r = match base.kind() {
                ModelKind::Poincare { a } => 2.0 * p.norm().min(1.0 - 1e-16).atanh() / a,
                _ => distance(base, o, p).ok()?,
            };
            Some((r, seen_from_basepoint(base, p).ok()?))
        })
        .collect();
    let far = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if far < 2.0 {
        return Err(GeomError::InsufficientExtent);
    }
    let shells: Vec<(f64, f64)> = [far / 8.0, far / 4.0, far / 2.0]
        .iter()
        .map(|&r| {
            let a: Vec<f64> = samples.iter().filter(|s| s.0 >= r).map(|s| s.1).collect();
            (r, angular_hull(&a).1)
        })
        .collect();
    let (theta0, _) = {
        let a: Vec<f64> = samples.iter().filter(|s| s.0 >= far / 2.0).map(|s| s.1).collect();
        angular_hull(&a)
    };
    let contracting = shells.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    let single_point = contracting && shells[2].1 < settings.end_tolerance;
    let mut rep = SimpleEndReport {
        applicable: true,
        theta0: Some(theta0),
        shells,
        single_point,
        probes: Vec::new(),
        probes_compact: false,
        passes: false,
    };
    if !single_point {
        return Ok(rep);
    }
    let pairs = [(0.5, PI), (PI, TAU - 0.5), (0.3, TAU - 0.3), (0.5 * PI, 1.5 * PI), (1.0, 2.0), (4.3, 5.3)];
    rep.probes = pairs
        .par_iter()
        .map(|&(a, b)| {
            let ends = [theta0 + a, theta0 + b];
            let res = ideal_geodesic(base, IdealPoint::new(ends[0]), IdealPoint::new(ends[1]))
                .and_then(|g| intersect(model, surface, &VerticalPlane::from_oriented(&g)));
            match res {
                Ok(c) => EndProbe {
                    ends: [IdealPoint::new(ends[0]).angle(), IdealPoint::new(ends[1]).angle()],
                    components: c.len(),
                    compact: Some(c.iter().all(|c| c.is_compact(settings.diameter_cap))),
                },
                Err(_) => EndProbe {
                    ends,
                    components: 0,
                    compact: None,
                },
            }
        })
        .collect();
    rep.probes_compact = rep.probes.iter().all(|p| p.compact == Some(true));
    rep.passes = rep.single_point && rep.probes_compact;
    Ok(rep)
}
