//! Fermi coordinates along a complete geodesic: arc length of the foot and
//! signed distance, positive on the side `J α′` points to.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::foliation::foot_of_perpendicular;
use super::geodesic::{flow, GeodesicPath};
use super::ideal::{side_of_path, OrientedGeodesic, Side};
use super::model::{HadamardModel, ModelKind, Point2};
use crate::error::Result;

/// A complete geodesic given by one of its points and its chart direction there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompleteGeodesic {
    pub origin: Point2,
    pub psi: f64,
}

impl CompleteGeodesic {
    pub fn new(origin: Point2, psi: f64) -> Self {
        Self { origin, psi }
    }

    pub fn of(alpha: &OrientedGeodesic) -> Self {
        let o = alpha.path.initial();
        Self::new(o.point, o.psi)
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.origin, self.psi + std::f64::consts::PI)
    }

    /// Point at arc length `s` along the geodesic and its chart direction.
    pub fn at(&self, model: &HadamardModel, s: f64) -> Result<(Point2, f64)> {
        if let Some(a) = poincare_scale(model) {
            let (p, psi) = self.from_fermi_poincare(a, s, 0.0);
            return Ok((p, psi));
        }
        flow(model, self.origin, self.psi, 0.0, s, |_| 0.0)
    }

    /// Traced path over `[-half, half]`.
    pub fn path(&self, model: &HadamardModel, half: f64, spacing: f64) -> Result<GeodesicPath> {
        GeodesicPath::trace(model, self.origin, self.psi, -half, half, spacing)
    }

    fn mobius(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.origin.x, self.origin.y),
            Complex64::from_polar(1.0, self.psi),
        )
    }

    fn to_fermi_poincare(&self, a: f64, p: Point2) -> (f64, f64) {
        let (c, rot) = self.mobius();
        let z = Complex64::new(p.x, p.y);
        let w = (z - c) / (Complex64::new(1.0, 0.0) - c.conj() * z) / rot;
        let n = w.norm_sqr();
        let x0 = (1.0 + n) / (1.0 - n);
        let x1 = 2.0 * w.re / (1.0 - n);
        let x2 = 2.0 * w.im / (1.0 - n);
        ((x1 / x0).atanh() / a, x2.asinh() / a)
    }

    fn from_fermi_poincare(&self, a: f64, s: f64, d: f64) -> (Point2, f64) {
        let (c, rot) = self.mobius();
        let (s, d) = (a * s, a * d);
        let x0 = d.cosh() * s.cosh();
        let x1 = d.cosh() * s.sinh();
        let x2 = d.sinh();
        let w = Complex64::new(x1, x2) / (1.0 + x0);
        let one = Complex64::new(1.0, 0.0);
        let rw = rot * w;
        let z = (rw + c) / (one + c.conj() * rw);
        // direction of the curve s ↦ z at fixed d: the image of the
        // hyperbolic translation direction, transported through the map
        let dw = {
            // d/ds of w for fixed d
            let dx0 = d.cosh() * s.sinh();
            let dx1 = d.cosh() * s.cosh();
            (Complex64::new(dx1, 0.0) * (1.0 + x0) - Complex64::new(x1, x2) * dx0) / ((1.0 + x0) * (1.0 + x0))
        };
        let dz = rot * dw * (one - c.norm_sqr()) / ((one + c.conj() * rw) * (one + c.conj() * rw));
        (Point2::new(z.re, z.im), dz.im.atan2(dz.re))
    }

    /// Fermi coordinates `(s, d)` of `p`.
    pub fn to_fermi(&self, model: &HadamardModel, p: Point2) -> Result<(f64, f64)> {
        if let Some(a) = poincare_scale(model) {
            return Ok(self.to_fermi_poincare(a, p));
        }
        self.to_fermi_generic(model, p)
    }

    /// The numeric route: foot of the perpendicular and side test.
    pub fn to_fermi_generic(&self, model: &HadamardModel, p: Point2) -> Result<(f64, f64)> {
        let half = OrientedGeodesic::half_length(model);
        let path = self.path(model, half, 0.05)?;
        let foot = foot_of_perpendicular(&path, p)?;
        let sign = match side_of_path(model, &path, p, 1e-12) {
            Side::Exterior => 1.0,
            Side::Interior => -1.0,
            Side::On => 0.0,
        };
        Ok((foot.s, sign * foot.distance))
    }

    /// The point with Fermi coordinates `(s, d)`.
    pub fn from_fermi(&self, model: &HadamardModel, s: f64, d: f64) -> Result<Point2> {
        if let Some(a) = poincare_scale(model) {
            return Ok(self.from_fermi_poincare(a, s, d).0);
        }
        self.from_fermi_generic(model, s, d)
    }

    pub fn from_fermi_generic(&self, model: &HadamardModel, s: f64, d: f64) -> Result<Point2> {
        let (q, psi) = flow(model, self.origin, self.psi, 0.0, s, |_| 0.0)?;
        flow(model, q, psi + FRAC_PI_2, 0.0, d, |_| 0.0).map(|r| r.0)
    }

    /// The geodesic orthogonal to this one at arc length `s`, oriented by `J α′`.
    pub fn orthogonal_at(&self, model: &HadamardModel, s: f64) -> Result<CompleteGeodesic> {
        let (p, psi) = self.at(model, s)?;
        Ok(CompleteGeodesic::new(p, psi + FRAC_PI_2))
    }
}

fn poincare_scale(model: &HadamardModel) -> Option<f64> {
    match model.kind() {
        ModelKind::Poincare { a } => Some(*a),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_generic_agreement() {
        let m = HadamardModel::scaled_poincare(1.3);
        let g = CompleteGeodesic::new(Point2::new(0.2, -0.1), 0.7);
        let p = Point2::new(-0.3, 0.45);
        let (s, d) = g.to_fermi(&m, p).unwrap();
        let back = g.from_fermi(&m, s, d).unwrap();
        assert!(back.dist(&p) < 1e-12);
        let (sg, dg) = g.to_fermi_generic(&m, p).unwrap();
        assert!((s - sg).abs() < 1e-8 && (d - dg).abs() < 1e-8, "{s} {d} vs {sg} {dg}");
        let pg = g.from_fermi_generic(&m, s, d).unwrap();
        assert!(pg.dist(&p) < 1e-9);
    }

    #[test]
    fn direction_along_geodesic() {
        let m = HadamardModel::poincare();
        let g = CompleteGeodesic::new(Point2::new(0.1, 0.3), -0.4);
        let (p, psi) = g.at(&m, 1.7).unwrap();
        let (q, qpsi) = flow(&m, g.origin, g.psi, 0.0, 1.7, |_| 0.0).unwrap();
        assert!(p.dist(&q) < 1e-10 && (psi - qpsi).abs() < 1e-9);
    }
}
