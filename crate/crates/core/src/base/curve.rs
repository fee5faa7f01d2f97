use num_complex::Complex64;

use super::geodesic::{flow, flow_sampled, PathSample};
use super::model::{HadamardModel, ModelKind, Point2};
use crate::error::{GeomError, Result};

/// Chart position and first two arc-length derivatives of a base curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub point: Point2,
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

/// An arc-length parametrized curve in the base chart.
pub trait BaseCurve: Send + Sync {
    fn model(&self) -> &HadamardModel;
    fn jet(&self, s: f64) -> Result<CurveJet>;
}

/// Signed geodesic curvature with respect to the counter-clockwise normal.
pub fn geodesic_curvature(curve: &dyn BaseCurve, s: f64) -> Result<f64> {
    let m = curve.model();
    let j = curve.jet(s)?;
    let l = m.lambda(j.point);
    let speed = l * j.d1[0].hypot(j.d1[1]);
    if (speed - 1.0).abs() > 1e-6 {
        return Err(GeomError::NotUnitSpeed { speed });
    }
    let g = m.christoffel(j.point);
    let (u, v) = (j.d1[0], j.d1[1]);
    let acc = |k: usize| j.d2[k] + g[k][0][0] * u * u + 2.0 * g[k][0][1] * u * v + g[k][1][1] * v * v;
    Ok(l * l * (acc(0) * -v + acc(1) * u))
}

/// Curvature profile `k(s) = k0 + k1 sin(w s + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureProfile {
    pub k0: f64,
    pub k1: f64,
    pub w: f64,
    pub phase: f64,
}

impl CurvatureProfile {
    pub fn constant(k0: f64) -> Self {
        Self {
            k0,
            k1: 0.0,
            w: 0.0,
            phase: 0.0,
        }
    }

    pub fn at(&self, s: f64) -> f64 {
        self.k0 + self.k1 * (self.w * s + self.phase).sin()
    }
}

/// The curve with prescribed geodesic curvature through a given state.
#[derive(Debug, Clone)]
pub struct PrescribedCurve {
    model: HadamardModel,
    samples: Vec<PathSample>,
    pub profile: CurvatureProfile,
}

impl PrescribedCurve {
    pub fn new(model: &HadamardModel, p: Point2, psi: f64, profile: CurvatureProfile, s_min: f64, s_max: f64) -> Result<Self> {
        let mut back = flow_sampled(model, p, psi, 0.0, s_min, 0.05, |s| profile.at(s))?;
        let fwd = flow_sampled(model, p, psi, 0.0, s_max, 0.05, |s| profile.at(s))?;
        back.reverse();
        back.extend_from_slice(&fwd[1..]);
        Ok(Self {
            model: model.clone(),
            samples: back,
            profile,
        })
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.samples[0].s, self.samples.last().unwrap().s)
    }

    pub fn state_at(&self, s: f64) -> Result<PathSample> {
        let (lo, hi) = self.s_range();
        if s < lo - 1e-12 || s > hi + 1e-12 {
            return Err(GeomError::InvalidInput(format!("s = {s} outside [{lo}, {hi}]")));
        }
        let i = self.samples.partition_point(|q| q.s < s).min(self.samples.len() - 1);
        let near = self.samples[i];
        let prof = self.profile;
        let (point, psi) = flow(&self.model, near.point, near.psi, near.s, s, |t| prof.at(t))?;
        Ok(PathSample { s, point, psi })
    }
}

impl BaseCurve for PrescribedCurve {
    fn model(&self) -> &HadamardModel {
        &self.model
    }

    fn jet(&self, s: f64) -> Result<CurveJet> {
        let st = self.state_at(s)?;
        let m = &self.model;
        let il = m.inv_lambda(st.point);
        let g = m.grad_phi_scaled(st.point);
        let (sn, cs) = st.psi.sin_cos();
        let dpsi = self.profile.at(s) + cs * g[1] - sn * g[0];
        let radial = il * (g[0] * cs + g[1] * sn);
        Ok(CurveJet {
            point: st.point,
            d1: [il * cs, il * sn],
            d2: [-il * sn * dpsi - radial * cs, il * cs * dpsi - radial * sn],
        })
    }
}

/// Geodesic circle about `center` in a scaled Poincaré disk, traversed
/// counter-clockwise by arc length from the point in direction `start`.
#[derive(Debug, Clone)]
pub struct GeodesicCircle {
    model: HadamardModel,
    a: f64,
    pub center: Point2,
    pub radius: f64,
    pub start: f64,
}

impl GeodesicCircle {
    pub fn new(model: &HadamardModel, center: Point2, radius: f64, start: f64) -> Result<Self> {
        let ModelKind::Poincare { a } = model.kind() else {
            return Err(GeomError::InvalidInput("closed-form circles need a Poincaré model".into()));
        };
        Ok(Self {
            model: model.clone(),
            a: *a,
            center,
            radius,
            start,
        })
    }

    pub fn circumference(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.a * self.radius).sinh() / self.a
    }

    /// `a coth(a r)`, the curvature towards the centre.
    pub fn expected_curvature(&self) -> f64 {
        self.a / (self.a * self.radius).tanh()
    }
}

impl BaseCurve for GeodesicCircle {
    fn model(&self) -> &HadamardModel {
        &self.model
    }

    fn jet(&self, s: f64) -> Result<CurveJet> {
        let c = Complex64::new(self.center.x, self.center.y);
        let one = Complex64::new(1.0, 0.0);
        let rho = (0.5 * self.a * self.radius).tanh();
        let rate = self.a / (self.a * self.radius).sinh();
        let th = self.start + rate * s;
        let e = Complex64::from_polar(1.0, th);
        let w = rho * e;
        let w1 = Complex64::new(0.0, rho * rate) * e;
        let w2 = -rho * rate * rate * e;
        let den = one + c.conj() * w;
        let z = (w + c) / den;
        let k = 1.0 - c.norm_sqr();
        let z1 = k / (den * den);
        let z2 = -2.0 * c.conj() * k / (den * den * den);
        let d1 = z1 * w1;
        let d2 = z2 * w1 * w1 + z1 * w2;
        Ok(CurveJet {
            point: Point2::new(z.re, z.im),
            d1: [d1.re, d1.im],
            d2: [d2.re, d2.im],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: `k_g = (k_E − ∂_n φ)/λ` from chart finite differences.
    fn fd_curvature(curve: &dyn BaseCurve, s: f64) -> f64 {
        let m = curve.model();
        let h = 1e-4;
        let p = |t: f64| curve.jet(t).unwrap().point;
        let (a, b, c) = (p(s - h), p(s), p(s + h));
        let d1 = [(c.x - a.x) / (2.0 * h), (c.y - a.y) / (2.0 * h)];
        let d2 = [(c.x - 2.0 * b.x + a.x) / (h * h), (c.y - 2.0 * b.y + a.y) / (h * h)];
        let sp = d1[0].hypot(d1[1]);
        let ke = (d1[0] * d2[1] - d1[1] * d2[0]) / sp.powi(3);
        let n = [-d1[1] / sp, d1[0] / sp];
        let g = m.grad_phi(b);
        (ke - g[0] * n[0] - g[1] * n[1]) / m.lambda(b)
    }

    #[test]
    fn circle_curvature_closed_form_and_fd() {
        let m = HadamardModel::poincare();
        let c = GeodesicCircle::new(&m, Point2::new(0.2, -0.3), 1.0, 0.4).unwrap();
        for s in [0.0, 1.0, 3.0] {
            let k = geodesic_curvature(&c, s).unwrap();
            assert!((k - 1.0f64 / 1.0f64.tanh()).abs() < 1e-10);
            assert!((k - fd_curvature(&c, s)).abs() < 1e-5);
        }
    }

    #[test]
    fn prescribed_curvature_recovered() {
        let m = HadamardModel::warped_disk(1.0, 0.2);
        let prof = CurvatureProfile {
            k0: 0.3,
            k1: 0.5,
            w: 1.3,
            phase: 0.2,
        };
        let c = PrescribedCurve::new(&m, Point2::new(0.1, 0.1), 0.5, prof, -1.0, 2.0).unwrap();
        for s in [-0.7, 0.0, 1.5] {
            let k = geodesic_curvature(&c, s).unwrap();
            assert!((k - prof.at(s)).abs() < 1e-10);
            assert!((k - fd_curvature(&c, s)).abs() < 1e-5);
        }
    }
}
