use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};

use super::{surface_geometry, ImmersedSurface, ParamDomain};
use crate::base::{geodesic_curvature, BaseCurve};
use crate::error::Result;
use crate::submersion::{Point3, SubmersionModel};

/// The preimage `π⁻¹(α)` of a unit-speed base curve, parametrized by `(s, t)`.
#[derive(Clone)]
pub struct VerticalCylinder {
    pub curve: Arc<dyn BaseCurve>,
    pub surface: ImmersedSurface,
}

impl VerticalCylinder {
    /// Normal is the horizontal lift of the counter-clockwise normal of `α`.
    pub fn new(curve: Arc<dyn BaseCurve>, s: [f64; 2], t: [f64; 2], resolution: [usize; 2]) -> Self {
        let c = curve.clone();
        let map = Arc::new(move |u: [f64; 2]| {
            let p = c.jet(u[0])?.point;
            Ok(Point3::new(p.x, p.y, u[1]))
        });
        // F_s ∧ F_t is minus the lifted left normal
        let surface = ImmersedSurface::new(
            "vertical_cylinder",
            ParamDomain {
                u: s,
                v: t,
                periodic: [false, false],
                window_edges: [true; 4],
            },
            resolution,
            map,
            -1.0,
        );
        Self { curve, surface }
    }
}

impl std::fmt::Debug for VerticalCylinder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VerticalCylinder").field("surface", &self.surface).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGeometry {
    pub s: f64,
    pub t: f64,
    /// Second fundamental form in the ordered basis `(ξ, T̄)`.
    pub ii: Matrix2<f64>,
    /// Curve's geodesic curvature, from the base curve alone.
    pub k_g: f64,
    /// Bundle curvature from the connection fit.
    pub tau: f64,
    pub mean: f64,
    pub extrinsic: f64,
    pub gauss: f64,
    pub nu: f64,
}

impl CylinderGeometry {
    /// `[[0, −τ], [−τ, k_g]]`
    pub fn expected_ii(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, -self.tau, -self.tau, self.k_g)
    }

    pub fn ii_defect(&self) -> f64 {
        (self.ii - self.expected_ii()).abs().max()
    }
}

/// Surface geometry of a vertical cylinder at `(s, t)`, with `II` rewritten
/// in the basis `(ξ, T̄)`.
pub fn cylinder_geometry(model: &SubmersionModel, cyl: &VerticalCylinder, s: f64, t: f64) -> Result<CylinderGeometry> {
    let g = surface_geometry(model, &cyl.surface, [s, t])?;
    let k_g = geodesic_curvature(cyl.curve.as_ref(), s)?;
    let tau = model.fit_tau(g.point, 0.0)?.tau;
    let d1 = cyl.curve.jet(s)?.d1;
    let w = model.form(g.point.base());
    // T̄ = F_s − ω(α′) F_t and ξ = F_t in parameter coordinates
    let basis = [Vector2::new(0.0, 1.0), Vector2::new(1.0, -(w[0] * d1[0] + w[1] * d1[1]))];
    let ii = Matrix2::from_fn(|i, j| (basis[i].transpose() * g.second * basis[j])[(0, 0)]);
    Ok(CylinderGeometry {
        s,
        t,
        ii,
        k_g,
        tau,
        mean: g.mean,
        extrinsic: g.extrinsic,
        gauss: g.gauss,
        nu: g.nu,
    })
}
