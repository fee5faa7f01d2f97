use rayon::prelude::*;
use serde::Serialize;

use super::contour::{zero_set, Contour};
use crate::base::{CompleteGeodesic, IdealPoint, OrientedGeodesic, Point2, Side};
use crate::error::{GeomError, Result};
use crate::quad;
use crate::submersion::{ConnectionForm, Point3, SubmersionModel};
use crate::surface::{surface_normal, ImmersedSurface};

/// `π⁻¹(α)` for a complete base geodesic `α`. Interior and exterior are the
/// preimages of the sides of `α`; the exterior is where `J α′` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerticalPlane {
    pub geodesic: CompleteGeodesic,
    /// Ideal endpoints, when the plane was built from them.
    pub ends: Option<[IdealPoint; 2]>,
}

impl VerticalPlane {
    pub fn new(geodesic: CompleteGeodesic) -> Self {
        Self { geodesic, ends: None }
    }

    pub fn from_oriented(alpha: &OrientedGeodesic) -> Self {
        Self {
            geodesic: CompleteGeodesic::of(alpha),
            ends: Some([alpha.ends.0, alpha.ends.1]),
        }
    }

    pub fn signed_distance(&self, model: &SubmersionModel, p: Point2) -> Result<f64> {
        Ok(self.geodesic.to_fermi(model.base(), p)?.1)
    }

    pub fn side(&self, model: &SubmersionModel, p: Point3) -> Result<Side> {
        let d = self.signed_distance(model, p.base())?;
        Ok(if d.abs() <= 1e-12 {
            Side::On
        } else if d > 0.0 {
            Side::Exterior
        } else {
            Side::Interior
        })
    }

    /// `∫₀^σ ω(α′)`: the fiber shift that makes `(σ, t + W(σ))` flat coordinates.
    pub fn twist(&self, model: &SubmersionModel, sigma: f64) -> f64 {
        if matches!(model.omega(), ConnectionForm::Zero) || sigma == 0.0 {
            return 0.0;
        }
        let base = model.base();
        let integrand = |r: f64| match self.geodesic.at(base, r) {
            Ok((p, psi)) => {
                let w = model.form(p);
                base.inv_lambda(p) * (w[0] * psi.cos() + w[1] * psi.sin())
            }
            Err(_) => f64::NAN,
        };
        quad::integrate(integrand, 0.0, sigma, (sigma.abs() / 0.5).ceil().max(1.0) as usize)
    }

    /// Flat coordinates `(σ, z)` of a point on the plane.
    pub fn plane_coords(&self, model: &SubmersionModel, p: Point3) -> Result<[f64; 2]> {
        let sigma = self.geodesic.to_fermi(model.base(), p.base())?.0;
        Ok([sigma, p.t + self.twist(model, sigma)])
    }
}

/// The planes orthogonal to a horizontal geodesic `β` at the arc lengths of a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneFoliation {
    pub beta: CompleteGeodesic,
    pub t_grid: Vec<f64>,
}

impl PlaneFoliation {
    pub fn new(beta: CompleteGeodesic, t_grid: Vec<f64>) -> Result<Self> {
        if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GeomError::InvalidInput("t-grid must be strictly increasing".into()));
        }
        Ok(Self { beta, t_grid })
    }

    /// Uniform grid `t0, t0 + dt, …` up to `t1`.
    pub fn uniform(beta: CompleteGeodesic, t0: f64, t1: f64, dt: f64) -> Result<Self> {
        let n = ((t1 - t0) / dt).round() as usize;
        Self::new(beta, (0..=n).map(|k| t0 + k as f64 * dt).collect())
    }

    /// `P_β(t)`; its base geodesic passes through `β(t)` in direction `J β′`.
    pub fn plane(&self, model: &SubmersionModel, t: f64) -> Result<VerticalPlane> {
        Ok(VerticalPlane::new(self.beta.orthogonal_at(model.base(), t)?))
    }

    /// The same planes swept along `−β`.
    pub fn reversed(&self) -> Self {
        Self {
            beta: self.beta.reversed(),
            t_grid: self.t_grid.iter().rev().map(|t| -t).collect(),
        }
    }

    /// The same family with every grid step halved.
    pub fn halved(&self) -> Self {
        let mut g = Vec::with_capacity(2 * self.t_grid.len());
        for w in self.t_grid.windows(2) {
            g.push(w[0]);
            g.push(0.5 * (w[0] + w[1]));
        }
        g.extend(self.t_grid.last());
        Self {
            beta: self.beta,
            t_grid: g,
        }
    }
}

/// One component of `Σ ∩ P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionCurve {
    pub params: Vec<[f64; 2]>,
    pub points: Vec<Point3>,
    /// Flat plane coordinates `(σ, z)`.
    pub plane_coords: Vec<[f64; 2]>,
    /// Cumulative arc length in the plane.
    pub arc: Vec<f64>,
    pub closed: bool,
    pub touches_window: bool,
    /// Menger curvature in the plane at each vertex; NaN at open ends.
    pub curvature: Vec<f64>,
    /// `min sin∠(Σ, P)` over the vertices.
    pub transversality: f64,
    /// Largest distance of a vertex from the plane.
    pub plane_distance: f64,
    /// Largest distance between consecutive vertices.
    pub max_step: f64,
    pub diameter: f64,
}

impl IntersectionCurve {
    /// A curve given directly in plane coordinates.
    pub fn from_plane_polyline(coords: Vec<[f64; 2]>, closed: bool, touches_window: bool) -> Self {
        let n = coords.len();
        let mut c = Self {
            params: vec![[f64::NAN; 2]; n],
            points: coords.iter().map(|q| Point3::new(f64::NAN, f64::NAN, q[1])).collect(),
            plane_coords: coords,
            arc: Vec::new(),
            closed,
            touches_window,
            curvature: Vec::new(),
            transversality: 1.0,
            plane_distance: 0.0,
            max_step: 0.0,
            diameter: 0.0,
        };
        c.finish();
        c
    }

    pub fn len(&self) -> usize {
        self.plane_coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plane_coords.is_empty()
    }

    /// Closed, away from the window, and with diameter below `cap`.
    pub fn is_compact(&self, cap: f64) -> bool {
        self.closed && !self.touches_window && self.diameter < cap
    }

    pub fn length(&self) -> f64 {
        let l = *self.arc.last().unwrap_or(&0.0);
        if self.closed && self.len() > 1 {
            l + dist(self.plane_coords[0], *self.plane_coords.last().unwrap())
        } else {
            l
        }
    }

    /// Drops vertices that nearly coincide with their predecessor: contour
    /// vertices sit on grid edges and can be arbitrarily close together.
    fn thin(&mut self) {
        if self.len() < 4 {
            return;
        }
        let mut steps: Vec<f64> = self.plane_coords.windows(2).map(|w| dist(w[0], w[1])).collect();
        steps.sort_by(f64::total_cmp);
        let floor = 0.2 * steps[steps.len() / 2];
        let mut keep = vec![0usize];
        for k in 1..self.len() {
            let last = *keep.last().unwrap();
            let is_end = !self.closed && k == self.len() - 1;
            if dist(self.plane_coords[k], self.plane_coords[last]) >= floor || is_end {
                if is_end && keep.len() > 1 && dist(self.plane_coords[k], self.plane_coords[last]) < floor {
                    keep.pop();
                }
                keep.push(k);
            }
        }
        if self.closed && keep.len() > 3 && dist(self.plane_coords[*keep.last().unwrap()], self.plane_coords[0]) < floor {
            keep.pop();
        }
        self.params = keep.iter().map(|&k| self.params[k]).collect();
        self.points = keep.iter().map(|&k| self.points[k]).collect();
        self.plane_coords = keep.iter().map(|&k| self.plane_coords[k]).collect();
    }

    fn finish(&mut self) {
        self.thin();
        let q = &self.plane_coords;
        let n = q.len();
        self.arc = std::iter::once(0.0)
            .chain(q.windows(2).scan(0.0, |acc, w| {
                *acc += dist(w[0], w[1]);
                Some(*acc)
            }))
            .collect();
        self.max_step = q.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max);
        if self.closed && n > 1 {
            self.max_step = self.max_step.max(dist(q[0], q[n - 1]));
        }
        self.curvature = (0..n)
            .map(|k| {
                if n < 3 || (!self.closed && (k == 0 || k == n - 1)) {
                    return f64::NAN;
                }
                let a = q[(k + n - 1) % n];
                let c = q[(k + 1) % n];
                menger(a, q[k], c)
            })
            .collect();
        let mut diam: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                diam = diam.max(dist(q[i], q[j]));
            }
        }
        self.diameter = diam;
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Signed curvature of the circle through three points, positive for a left turn.
pub(crate) fn menger(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    2.0 * cross / (dist(a, b) * dist(b, c) * dist(a, c))
}

/// Per-point data for a section: the level value (zero on the plane) and
/// the plane arc-length coordinate `σ`.
pub(crate) type LevelFn<'a> = dyn Fn(Point2) -> Result<(f64, f64)> + Sync + 'a;

/// Node images of a surface; `None` where the map fails or leaves the chart.
pub(crate) fn node_points(model: &SubmersionModel, surface: &ImmersedSurface) -> Vec<Option<Point3>> {
    let [nu, nv] = surface.node_counts();
    (0..nu * nv)
        .into_par_iter()
        .map(|k| surface.point(surface.node(k / nv, k % nv)).ok().filter(|p| model.contains(*p)))
        .collect()
}

/// Chains the zero set of a level function into intersection curves.
pub(crate) fn section_curves(
    model: &SubmersionModel,
    surface: &ImmersedSurface,
    plane: &VerticalPlane,
    node_values: &[f64],
    level: &LevelFn<'_>,
) -> Result<Vec<IntersectionCurve>> {
    let f = |u: [f64; 2]| -> Option<f64> {
        let p = surface.point(u).ok().filter(|p| model.contains(*p))?;
        level(p.base()).ok().map(|v| v.0)
    };
    let contours: Vec<Contour> = zero_set(surface, node_values, f);
    contours
        .into_par_iter()
        .filter(|c| !c.params.is_empty())
        .map(|c| build_curve(model, surface, plane, c, level))
        .collect()
}

fn build_curve(
    model: &SubmersionModel,
    surface: &ImmersedSurface,
    plane: &VerticalPlane,
    c: Contour,
    level: &LevelFn<'_>,
) -> Result<IntersectionCurve> {
    let base = model.base();
    let xi_shift = |sigma: f64| plane.twist(model, sigma);
    let mut points = Vec::with_capacity(c.params.len());
    let mut coords = Vec::with_capacity(c.params.len());
    let mut trans = f64::INFINITY;
    let mut off: f64 = 0.0;
    for u in &c.params {
        let p = surface.point(*u)?;
        let b = p.base();
        let (v, sigma) = level(b)?;
        // gradient of the level function, in chart components
        let h = 1e-6 * base.inv_lambda(b).max(1e-12);
        let dx = (level(Point2::new(b.x + h, b.y))?.0 - level(Point2::new(b.x - h, b.y))?.0) / (2.0 * h);
        let dy = (level(Point2::new(b.x, b.y + h))?.0 - level(Point2::new(b.x, b.y - h))?.0) / (2.0 * h);
        let grad = dx.hypot(dy) * base.inv_lambda(b);
        let (_, n) = surface_normal(model, surface, *u)?;
        let normal_part = (dx * n[0] + dy * n[1]) / grad;
        trans = trans.min((1.0 - normal_part * normal_part).max(0.0).sqrt());
        off = off.max(v.abs() / grad);
        points.push(p);
        coords.push([sigma, p.t + xi_shift(sigma)]);
    }
    let mut curve = IntersectionCurve {
        params: c.params,
        points,
        plane_coords: coords,
        arc: Vec::new(),
        closed: c.closed,
        touches_window: c.touches_window,
        curvature: Vec::new(),
        transversality: trans,
        plane_distance: off,
        max_step: 0.0,
        diameter: 0.0,
    };
    curve.finish();
    Ok(curve)
}

/// Components of `Σ ∩ P`, extracted by marching squares on the signed base
/// distance to the plane and refined onto it.
pub fn intersect(model: &SubmersionModel, surface: &ImmersedSurface, plane: &VerticalPlane) -> Result<Vec<IntersectionCurve>> {
    let level = |p: Point2| -> Result<(f64, f64)> {
        let (s, d) = plane.geodesic.to_fermi(model.base(), p)?;
        Ok((d, s))
    };
    let pts = node_points(model, surface);
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|p| p.and_then(|p| level(p.base()).ok()).map_or(f64::NAN, |v| v.0))
        .collect();
    let curves = section_curves(model, surface, plane, &vals, &level)?;
    if let Some(c) = curves.iter().find(|c| c.transversality < 1e-4) {
        return Err(GeomError::TangencySuspected {
            min_gradient: c.transversality,
        });
    }
    Ok(curves)
}
