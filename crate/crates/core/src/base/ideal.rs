use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geodesic::{flow, GeodesicPath, PathSample};
use super::model::{wrap_2pi, wrap_pi, ChartDomain, HadamardModel, Point2, Tangent2};
use crate::error::{GeomError, Result};
use crate::tolerances::Tolerances;

/// A point of the ideal boundary, as a direction angle at the basepoint.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IdealPoint {
    angle: f64,
}

impl IdealPoint {
    /// Angular tolerance of `==`.
    pub const TOLERANCE: f64 = 1e-4;

    pub fn new(angle: f64) -> Self {
        Self {
            angle: wrap_2pi(angle),
        }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Circular distance between two ideal points.
    pub fn separation(&self, other: &IdealPoint) -> f64 {
        wrap_pi(self.angle - other.angle).abs()
    }
}

impl PartialEq for IdealPoint {
    fn eq(&self, other: &Self) -> bool {
        self.separation(other) <= Self::TOLERANCE
    }
}

/// Polar angle of the chart-boundary point the forward geodesic ray from `p`
/// converges to.
pub fn boundary_angle(model: &HadamardModel, p: Point2, psi: f64, tol: &Tolerances) -> Result<f64> {
    if model.domain() != ChartDomain::UnitDisk {
        return Err(GeomError::NoStabilization {
            cutoff: tol.ideal_cutoff,
        });
    }
    let mut s = 0.0;
    let mut state = (p, psi);
    let mut prev: Option<f64> = None;
    let mut next = 1.0;
    loop {
        let target = f64::min(next, tol.ideal_cutoff);
        state = flow(model, state.0, state.1, s, target, |_| 0.0)?;
        s = target;
        let a = state.0.angle();
        if let Some(b) = prev {
            if wrap_pi(a - b).abs() < tol.ideal_drift {
                return Ok(wrap_2pi(a));
            }
        }
        if s >= tol.ideal_cutoff {
            return Err(GeomError::NoStabilization {
                cutoff: tol.ideal_cutoff,
            });
        }
        prev = Some(a);
        next *= 2.0;
    }
}

/// Converts a basepoint direction to the chart-boundary angle it limits to.
pub fn boundary_of(model: &HadamardModel, x: IdealPoint, tol: &Tolerances) -> Result<f64> {
    if model.is_radial() {
        return Ok(x.angle());
    }
    boundary_angle(model, model.basepoint(), x.angle(), tol)
}

/// Inverse of [`boundary_of`]: the basepoint direction whose ray limits to
/// the chart-boundary angle `b`.
pub fn ideal_of_boundary(model: &HadamardModel, b: f64, tol: &Tolerances) -> Result<IdealPoint> {
    if model.is_radial() {
        return Ok(IdealPoint::new(b));
    }
    let o = model.basepoint();
    let f = |th: f64| -> Result<f64> { Ok(wrap_pi(boundary_angle(model, o, th, tol)? - b)) };
    // the boundary map is an increasing circle homeomorphism, so a damped
    // secant iteration from the identity guess converges
    let mut x0 = b;
    let mut f0 = f(x0)?;
    let mut x1 = b - f0;
    let mut f1 = f(x1)?;
    for it in 0..60 {
        if f1.abs() < 1e-11 {
            return Ok(IdealPoint::new(x1));
        }
        let slope = if (x1 - x0).abs() > 1e-14 { (f1 - f0) / (x1 - x0) } else { 1.0 };
        let slope = if slope > 0.05 { slope } else { 1.0 };
        let step = (-f1 / slope).clamp(-0.5, 0.5);
        x0 = x1;
        f0 = f1;
        x1 += step;
        f1 = f(x1)?;
        if it == 59 {
            break;
        }
    }
    if f1.abs() < 1e-8 {
        return Ok(IdealPoint::new(x1));
    }
    Err(GeomError::NoConvergence {
        what: "ideal point inversion",
        iterations: 60,
        residual: f1.abs(),
    })
}

/// The ideal point `G_o⁻¹` of the forward ray with initial velocity `v`.
pub fn ideal_point(model: &HadamardModel, p: Point2, v: Tangent2) -> Result<IdealPoint> {
    ideal_point_with(model, p, v, &Tolerances::default())
}

pub fn ideal_point_with(model: &HadamardModel, p: Point2, v: Tangent2, tol: &Tolerances) -> Result<IdealPoint> {
    let b = boundary_angle(model, p, v.chart_angle(), tol)?;
    ideal_of_boundary(model, b, tol)
}

/// A complete geodesic together with its ordered ideal endpoints.
#[derive(Debug, Clone)]
pub struct OrientedGeodesic {
    pub path: GeodesicPath,
    /// Backward and forward ideal endpoints.
    pub ends: (IdealPoint, IdealPoint),
    /// The same endpoints as chart-boundary polar angles.
    pub boundary_ends: (f64, f64),
}

impl OrientedGeodesic {
    /// Arc length traced in each direction from the closest point to `o`.
    pub fn half_length(model: &HadamardModel) -> f64 {
        match model.curvature_bound() {
            Some(c) if c < 0.0 => (20.0 / c.abs().sqrt()).min(40.0),
            _ => 20.0,
        }
    }

    /// The same trace with reversed orientation.
    pub fn reversed(&self) -> Result<OrientedGeodesic> {
        let o = self.path.initial();
        let (a, b) = self.path.s_range();
        let path = GeodesicPath::trace(self.path.model(), o.point, o.psi + PI, -b, -a, super::geodesic::DEFAULT_SPACING)?;
        Ok(OrientedGeodesic {
            path,
            ends: (self.ends.1, self.ends.0),
            boundary_ends: (self.boundary_ends.1, self.boundary_ends.0),
        })
    }

    /// Chart polyline including the two boundary endpoints.
    pub fn closed_polyline(&self) -> Vec<Point2> {
        let mut pts = vec![Point2::polar(1.0, self.boundary_ends.0)];
        pts.extend(self.path.chart_polyline());
        pts.push(Point2::polar(1.0, self.boundary_ends.1));
        pts
    }
}

/// Polar angles of the backward and forward ends of the geodesic through
/// `p` with direction `psi`, after arc length `reach` each way.
fn end_angles(model: &HadamardModel, p: Point2, psi: f64, reach: f64) -> Result<(f64, f64)> {
    let (b, _) = flow(model, p, psi, 0.0, -reach, |_| 0.0)?;
    let (f, _) = flow(model, p, psi, 0.0, reach, |_| 0.0)?;
    Ok((b.angle(), f.angle()))
}

/// The geodesic from `x1` to `x2`, found by shooting from a point on the
/// transversal ray at the mid-angle.
pub fn ideal_geodesic(model: &HadamardModel, x1: IdealPoint, x2: IdealPoint) -> Result<OrientedGeodesic> {
    ideal_geodesic_with(model, x1, x2, &Tolerances::default())
}

pub fn ideal_geodesic_with(
    model: &HadamardModel,
    x1: IdealPoint,
    x2: IdealPoint,
    tol: &Tolerances,
) -> Result<OrientedGeodesic> {
    if x1.separation(&x2) < 1e-9 {
        return Err(GeomError::InvalidInput("ideal endpoints coincide".into()));
    }
    let b1 = boundary_of(model, x1, tol)?;
    let b2 = boundary_of(model, x2, tol)?;
    let d = wrap_pi(b2 - b1);
    let m = b1 + 0.5 * d;
    let delta = 0.5 * d.abs();
    // closest point to o of the hyperbolic geodesic with these endpoints
    let r0 = (1.0 - delta.sin()) / delta.cos().max(1e-300);
    let mut rho = if delta >= 0.5 * PI - 1e-12 { 0.0 } else { r0 };
    let mut psi = if d >= 0.0 { m + 0.5 * PI } else { m - 0.5 * PI };
    let reach = OrientedGeodesic::half_length(model);
    let (cm, sm) = (m.cos(), m.sin());
    let at = |rho: f64| Point2::new(rho * cm, rho * sm);
    let resid = |rho: f64, psi: f64| -> Result<[f64; 2]> {
        let (a, b) = end_angles(model, at(rho), psi, reach)?;
        Ok([wrap_pi(a - b1), wrap_pi(b - b2)])
    };
    let norm = |r: &[f64; 2]| r[0].hypot(r[1]);
    let mut r = resid(rho, psi)?;
    let mut iters = 0;
    while norm(&r) > 1e-11 {
        if iters >= tol.solver_budget {
            break;
        }
        iters += 1;
        let h = 1e-7;
        let rp = resid(rho + h, psi)?;
        let rq = resid(rho, psi + h)?;
        let j = [
            [(rp[0] - r[0]) / h, (rq[0] - r[0]) / h],
            [(rp[1] - r[1]) / h, (rq[1] - r[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let drho = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dpsi = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let nr = rho + t * drho;
            if nr.abs() < 1.0 - 1e-9 {
                if let Ok(v) = resid(nr, psi + t * dpsi) {
                    if norm(&v) < norm(&r) {
                        rho = nr;
                        psi += t * dpsi;
                        r = v;
                        improved = true;
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if norm(&r) > 1e-8 {
        return Err(GeomError::NoConvergence {
            what: "ideal geodesic shooting",
            iterations: iters,
            residual: norm(&r),
        });
    }
    let path = GeodesicPath::trace(model, at(rho), psi, -reach, reach, super::geodesic::DEFAULT_SPACING)?;
    Ok(OrientedGeodesic {
        path,
        ends: (x1, x2),
        boundary_ends: (wrap_2pi(b1), wrap_2pi(b2)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Interior,
    Exterior,
    On,
}

/// Chart-nearest point of a path to `p`, refined on the exact curve.
pub(crate) fn nearest_on_path(path: &GeodesicPath, p: Point2) -> Result<(PathSample, f64)> {
    let samples = path.samples();
    let mut best = (f64::INFINITY, 0usize);
    for (i, q) in samples.iter().enumerate() {
        let d = q.point.dist(&p);
        if d < best.0 {
            best = (d, i);
        }
    }
    let i = best.1;
    let lo = samples[i.saturating_sub(1)].s;
    let hi = samples[(i + 1).min(samples.len() - 1)].s;
    // derivative of half the squared chart distance along the path
    let g = |s: f64| -> Result<(f64, PathSample)> {
        let st = path.state_at(s)?;
        let (sn, cs) = st.psi.sin_cos();
        Ok(((st.point.x - p.x) * cs + (st.point.y - p.y) * sn, st))
    };
    let (mut a, mut b) = (lo, hi);
    let (mut ga, sa) = g(a)?;
    let (gb, sb) = g(b)?;
    let mut best_state = if sa.point.dist(&p) < sb.point.dist(&p) { sa } else { sb };
    if ga.signum() != gb.signum() {
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let (gm, sm) = g(m)?;
            best_state = sm;
            if gm.signum() == ga.signum() {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
            if b - a < 1e-14 * (1.0 + m.abs()) {
                break;
            }
        }
    } else if samples[i].point.dist(&p) < best_state.point.dist(&p) {
        best_state = samples[i];
    }
    let d = best_state.point.dist(&p);
    Ok((best_state, d))
}

/// Which side of the oriented geodesic `alpha` the point `p` lies on.
///
/// Exterior is the side the counter-clockwise rotation of `α′` points to.
pub fn side_of(model: &HadamardModel, alpha: &OrientedGeodesic, p: Point2) -> Side {
    side_of_path(model, &alpha.path, p, 1e-9)
}

/// [`side_of`] for any traced geodesic, with an explicit `On` tolerance
/// measured in the metric.
pub fn side_of_path(model: &HadamardModel, path: &GeodesicPath, p: Point2, on_tol: f64) -> Side {
    let Ok((c, d)) = nearest_on_path(path, p) else {
        return Side::On;
    };
    if model.lambda(p) * d <= on_tol {
        return Side::On;
    }
    let (sn, cs) = c.psi.sin_cos();
    let cr = cs * (p.y - c.point.y) - sn * (p.x - c.point.x);
    if cr > 0.0 {
        Side::Exterior
    } else {
        Side::Interior
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basepoint_rays() {
        let m = HadamardModel::poincare();
        for th in [0.0, 1.0, 4.0] {
            let v = m.unit_tangent(Point2::ORIGIN, th);
            let x = ideal_point(&m, Point2::ORIGIN, v).unwrap();
            assert!(x.separation(&IdealPoint::new(th)) < 1e-9);
        }
    }

    #[test]
    fn horizontal_ray_above_origin() {
        let m = HadamardModel::poincare();
        let p = Point2::new(0.0, 0.5);
        let x = ideal_point(&m, p, m.unit_tangent(p, 0.0)).unwrap();
        // orthogonal circle: centre (0, k), k = (1 + 0.25)/(2·0.5) = 1.25, radius 0.75
        let (k, r) = (1.25f64, 0.75f64);
        // intersection with the unit circle: y = 1/k, x = +sqrt(1 - y²)
        let y = 1.0 / k;
        let expected = y.atan2((1.0 - y * y).sqrt());
        assert!((k * k - 1.0 - r * r).abs() < 1e-12);
        assert!(x.separation(&IdealPoint::new(expected)) < 1e-7, "{}", x.angle());
    }

    #[test]
    fn diameter_sides() {
        let m = HadamardModel::poincare();
        let g = ideal_geodesic(&m, IdealPoint::new(PI), IdealPoint::new(0.0)).unwrap();
        assert!(g.path.initial().point.norm() < 1e-9);
        assert_eq!(side_of(&m, &g, Point2::new(0.0, 0.5)), Side::Exterior);
        assert_eq!(side_of(&m, &g, Point2::new(0.0, -0.5)), Side::Interior);
        assert_eq!(side_of(&m, &g, Point2::new(0.3, 0.0)), Side::On);
        let r = g.reversed().unwrap();
        assert_eq!(side_of(&m, &r, Point2::new(0.0, 0.5)), Side::Interior);
    }

    #[test]
    fn warped_inversion_round_trip() {
        let m = HadamardModel::warped_disk(1.0, 0.3);
        let tol = Tolerances::default();
        for th in [0.3, 2.0, 5.0] {
            let b = boundary_of(&m, IdealPoint::new(th), &tol).unwrap();
            let back = ideal_of_boundary(&m, b, &tol).unwrap();
            assert!(back.separation(&IdealPoint::new(th)) < 1e-7);
        }
    }
}
