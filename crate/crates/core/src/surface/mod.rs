//! Immersed surfaces in a Killing submersion and their pointwise geometry.

mod cylinder;
mod fixtures;
mod hypothesis;

pub use cylinder::{cylinder_geometry, CylinderGeometry, VerticalCylinder};
pub use fixtures::{flaring_end, geodesic_sphere, killing_graph, parametric, saddle_graph, GraphDomain, SphereFixture};
pub use hypothesis::{hypothesis_check, HypothesisReport};

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::submersion::{Point3, SubmersionModel, Vec3};

pub type MapFn = Arc<dyn Fn([f64; 2]) -> Result<Point3> + Send + Sync>;
pub type TransitionFn = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;
pub type ChartSelector = Arc<dyn Fn([f64; 2]) -> bool + Send + Sync>;

/// Rectangle of parameters with periodicity flags and the edges that are
/// computational window boundaries (as opposed to seams or poles).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub periodic: [bool; 2],
    /// `[u_min, u_max, v_min, v_max]`
    pub window_edges: [bool; 4],
}

/// A second regular chart used where the sampling chart degenerates.
#[derive(Clone)]
pub struct AltChart {
    pub map: MapFn,
    /// Sampling parameters to alternate-chart parameters.
    pub to_alt: TransitionFn,
    /// Whether to evaluate geometry in the alternate chart at a sampling parameter.
    pub use_alt: ChartSelector,
}

/// A parametrized surface in the total-space chart.
#[derive(Clone)]
pub struct ImmersedSurface {
    pub name: String,
    pub domain: ParamDomain,
    /// Sample counts along `u` and `v`.
    pub resolution: [usize; 2],
    map: MapFn,
    alt: Option<AltChart>,
    /// `+1` when `N` is along `F_u ∧ F_v` in the sampling chart, `-1` otherwise.
    pub orientation: f64,
    /// Declared, not certified: the surface is compact / complete.
    pub compact: bool,
    pub complete: bool,
}

impl fmt::Debug for ImmersedSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersedSurface")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("resolution", &self.resolution)
            .field("orientation", &self.orientation)
            .field("two_charts", &self.alt.is_some())
            .finish()
    }
}

/// Pointwise geometry of a surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceGeometry {
    pub param: [f64; 2],
    /// 0 for the sampling chart, 1 for the alternate chart.
    pub chart: u8,
    pub point: Point3,
    pub first: Matrix2<f64>,
    pub second: Matrix2<f64>,
    pub normal: Vec3,
    pub nu: f64,
    pub tangential: Vec3,
    pub shape: Matrix2<f64>,
    pub k1: f64,
    pub k2: f64,
    pub mean: f64,
    pub extrinsic: f64,
    pub gauss: f64,
    /// `|ν² + ‖T‖² − 1|`
    pub unit_defect: f64,
    /// Asymmetry of `I·S`, which is self-adjoint in exact arithmetic.
    pub self_adjoint_residual: f64,
}

/// Derivatives of the map in one chart.
struct Jet {
    p: Point3,
    fu: Vec3,
    fv: Vec3,
    fuu: Vec3,
    fuv: Vec3,
    fvv: Vec3,
}

fn vec_of(p: Point3) -> Vec3 {
    p.coords()
}

impl ImmersedSurface {
    pub fn new(name: &str, domain: ParamDomain, resolution: [usize; 2], map: MapFn, orientation: f64) -> Self {
        Self {
            name: name.into(),
            domain,
            resolution,
            map,
            alt: None,
            orientation: orientation.signum(),
            compact: false,
            complete: true,
        }
    }

    pub fn with_alt(mut self, alt: AltChart) -> Self {
        self.alt = Some(alt);
        self
    }

    pub fn declared(mut self, compact: bool, complete: bool) -> Self {
        self.compact = compact;
        self.complete = complete;
        self
    }

    /// The same surface with the opposite normal.
    pub fn flipped(&self) -> Self {
        let mut s = self.clone();
        s.orientation = -s.orientation;
        s
    }

    /// The same surface with a different sampling resolution.
    pub fn with_resolution(&self, resolution: [usize; 2]) -> Self {
        let mut s = self.clone();
        s.resolution = resolution;
        s
    }

    /// Precomposes the map with a diffeomorphism of the parameter rectangle.
    pub fn reparametrized(&self, phi: Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>, orientation: f64) -> Self {
        let map = self.map.clone();
        let mut s = self.clone();
        s.map = Arc::new(move |u| map(phi(u)));
        s.alt = None;
        s.orientation = orientation;
        s
    }

    pub fn point(&self, u: [f64; 2]) -> Result<Point3> {
        (self.map)(u)
    }

    pub fn grid_step(&self) -> f64 {
        let du = (self.domain.u[1] - self.domain.u[0]) / self.resolution[0] as f64;
        let dv = (self.domain.v[1] - self.domain.v[0]) / self.resolution[1] as f64;
        du.min(dv)
    }

    /// Parameter of grid node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let d = &self.domain;
        [
            d.u[0] + (d.u[1] - d.u[0]) * i as f64 / self.resolution[0] as f64,
            d.v[0] + (d.v[1] - d.v[0]) * j as f64 / self.resolution[1] as f64,
        ]
    }

    /// Node counts along each axis; periodic axes do not repeat the seam.
    pub fn node_counts(&self) -> [usize; 2] {
        [
            self.resolution[0] + usize::from(!self.domain.periodic[0]),
            self.resolution[1] + usize::from(!self.domain.periodic[1]),
        ]
    }

    fn jet(map: &MapFn, u: [f64; 2], h: f64) -> Result<Jet> {
        let f = |a: f64, b: f64| map([u[0] + a, u[1] + b]).map(vec_of);
        let c = f(0.0, 0.0)?;
        let d1 = |h: f64| -> Result<(Vec3, Vec3, Vec3, Vec3, Vec3)> {
            let (up, um, vp, vm) = (f(h, 0.0)?, f(-h, 0.0)?, f(0.0, h)?, f(0.0, -h)?);
            let (pp, pm, mp, mm) = (f(h, h)?, f(h, -h)?, f(-h, h)?, f(-h, -h)?);
            Ok((
                (up - um) / (2.0 * h),
                (vp - vm) / (2.0 * h),
                (up - c * 2.0 + um) / (h * h),
                (pp - pm - mp + mm) / (4.0 * h * h),
                (vp - c * 2.0 + vm) / (h * h),
            ))
        };
        let a = d1(h)?;
        let b = d1(0.5 * h)?;
        let r = |x: Vec3, y: Vec3| (y * 4.0 - x) / 3.0;
        Ok(Jet {
            p: map(u)?,
            fu: r(a.0, b.0),
            fv: r(a.1, b.1),
            fuu: r(a.2, b.2),
            fuv: r(a.3, b.3),
            fvv: r(a.4, b.4),
        })
    }

    fn first_form(model: &SubmersionModel, map: &MapFn, u: [f64; 2], h: f64) -> Result<[f64; 3]> {
        let f = |a: f64, b: f64| map([u[0] + a, u[1] + b]).map(vec_of);
        let d = |h: f64| -> Result<(Vec3, Vec3)> {
            Ok((
                (f(h, 0.0)? - f(-h, 0.0)?) / (2.0 * h),
                (f(0.0, h)? - f(0.0, -h)?) / (2.0 * h),
            ))
        };
        let (a, b) = (d(h)?, d(0.5 * h)?);
        let fu = (a.0 * -1.0 + b.0 * 4.0) / 3.0;
        let fv = (a.1 * -1.0 + b.1 * 4.0) / 3.0;
        let p = map(u)?;
        Ok([
            model.inner(p, &fu, &fu),
            model.inner(p, &fu, &fv),
            model.inner(p, &fv, &fv),
        ])
    }

    /// Intrinsic curvature from the first fundamental form (Brioschi).
    fn brioschi(model: &SubmersionModel, map: &MapFn, u: [f64; 2], h_in: f64, h_out: f64) -> Result<f64> {
        let efg = |a: f64, b: f64| Self::first_form(model, map, [u[0] + a, u[1] + b], h_in);
        let c = efg(0.0, 0.0)?;
        let derivs = |h: f64| -> Result<[[f64; 3]; 5]> {
            let (up, um, vp, vm) = (efg(h, 0.0)?, efg(-h, 0.0)?, efg(0.0, h)?, efg(0.0, -h)?);
            let (pp, pm, mp, mm) = (efg(h, h)?, efg(h, -h)?, efg(-h, h)?, efg(-h, -h)?);
            let mut out = [[0.0; 3]; 5];
            for k in 0..3 {
                out[0][k] = (up[k] - um[k]) / (2.0 * h);
                out[1][k] = (vp[k] - vm[k]) / (2.0 * h);
                out[2][k] = (up[k] - 2.0 * c[k] + um[k]) / (h * h);
                out[3][k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
                out[4][k] = (vp[k] - 2.0 * c[k] + vm[k]) / (h * h);
            }
            Ok(out)
        };
        let (a, b) = (derivs(h_out)?, derivs(0.5 * h_out)?);
        let d: [[f64; 3]; 5] = std::array::from_fn(|i| std::array::from_fn(|k| (4.0 * b[i][k] - a[i][k]) / 3.0));
        let [e, f, g] = c;
        let (eu, fu, gu) = (d[0][0], d[0][1], d[0][2]);
        let (ev, fv, gv) = (d[1][0], d[1][1], d[1][2]);
        let guu = d[2][2];
        let fuv = d[3][1];
        let evv = d[4][0];
        let m1 = nalgebra::Matrix3::new(
            -0.5 * evv + fuv - 0.5 * guu,
            0.5 * eu,
            fu - 0.5 * ev,
            fv - 0.5 * gu,
            e,
            f,
            0.5 * gv,
            f,
            g,
        );
        let m2 = nalgebra::Matrix3::new(0.0, 0.5 * ev, 0.5 * gu, 0.5 * ev, e, f, 0.5 * gu, f, g);
        let w = e * g - f * f;
        Ok((m1.determinant() - m2.determinant()) / (w * w))
    }

    /// The chart, parameter and orientation sign used for geometry at `u`.
    fn chart_for(&self, u: [f64; 2]) -> (u8, MapFn, [f64; 2], f64) {
        if let Some(alt) = &self.alt {
            if (alt.use_alt)(u) {
                let q = (alt.to_alt)(u);
                // orientation of the transition, by differences; sampled
                // around `u` since the transition may degenerate at `u` itself
                let h = 1e-6;
                let det_at = |u: [f64; 2]| {
                    let a = (alt.to_alt)([u[0] + h, u[1]]);
                    let b = (alt.to_alt)([u[0] - h, u[1]]);
                    let c = (alt.to_alt)([u[0], u[1] + h]);
                    let d = (alt.to_alt)([u[0], u[1] - h]);
                    (a[0] - b[0]) * (c[1] - d[1]) - (a[1] - b[1]) * (c[0] - d[0])
                };
                let dlt = 0.25 * self.grid_step();
                let dom = &self.domain;
                let mut det = 0.0f64;
                for a in [0.0, 1.0, -1.0] {
                    for b in [0.0, 1.0, -1.0] {
                        let w = [u[0] + a * dlt, u[1] + b * dlt];
                        let inside = (dom.periodic[0] || (w[0] >= dom.u[0] && w[0] <= dom.u[1]))
                            && (dom.periodic[1] || (w[1] >= dom.v[0] && w[1] <= dom.v[1]));
                        let v = det_at(w);
                        if inside && v.abs() > det.abs() {
                            det = v;
                        }
                    }
                }
                return (1, alt.map.clone(), q, self.orientation * det.signum());
            }
        }
        (0, self.map.clone(), u, self.orientation)
    }
}

/// Point and unit normal at `u`, from first derivatives only.
pub fn surface_normal(model: &SubmersionModel, surface: &ImmersedSurface, u: [f64; 2]) -> Result<(Point3, Vec3)> {
    let (_, map, q, sign) = surface.chart_for(u);
    let h = surface.grid_step() / 8.0;
    let f = |a: f64, b: f64| map([q[0] + a, q[1] + b]).map(vec_of);
    let d = |h: f64| -> Result<(Vec3, Vec3)> {
        Ok((
            (f(h, 0.0)? - f(-h, 0.0)?) / (2.0 * h),
            (f(0.0, h)? - f(0.0, -h)?) / (2.0 * h),
        ))
    };
    let (a, b) = (d(h)?, d(0.5 * h)?);
    let fu = (b.0 * 4.0 - a.0) / 3.0;
    let fv = (b.1 * 4.0 - a.1) / 3.0;
    let p = map(q)?;
    let w = model.wedge(p, &fu, &fv);
    let n = model.norm(p, &w);
    if !(n > 1e-12) {
        return Err(GeomError::RankDeficient { sigma: n });
    }
    Ok((p, w * (sign / n)))
}

/// Fundamental forms, normal, angle function and curvatures at the parameter `u`.
pub fn surface_geometry(model: &SubmersionModel, surface: &ImmersedSurface, u: [f64; 2]) -> Result<SurfaceGeometry> {
    let (chart, map, q, sign) = surface.chart_for(u);
    let h = surface.grid_step() / 8.0;
    let j = ImmersedSurface::jet(&map, q, h)?;
    let p = j.p;
    if !model.contains(p) {
        return Err(GeomError::ChartExit { x: p.x, y: p.y });
    }
    let first = Matrix2::new(
        model.inner(p, &j.fu, &j.fu),
        model.inner(p, &j.fu, &j.fv),
        model.inner(p, &j.fu, &j.fv),
        model.inner(p, &j.fv, &j.fv),
    );
    let sigma = first.symmetric_eigenvalues().min().max(0.0).sqrt();
    if !(sigma > 1e-6) {
        return Err(GeomError::RankDeficient { sigma });
    }
    let w = model.wedge(p, &j.fu, &j.fv);
    let normal = w * (sign / model.norm(p, &w));
    let gamma = model.christoffel3(p)?;
    let ii = |a: &Vec3, b: &Vec3, ab: &Vec3| model.inner(p, &(ab + gamma.apply(a, b)), &normal);
    let l = ii(&j.fu, &j.fu, &j.fuu);
    let m = ii(&j.fu, &j.fv, &j.fuv);
    let n = ii(&j.fv, &j.fv, &j.fvv);
    let second = Matrix2::new(l, m, m, n);
    let inv = first.try_inverse().ok_or(GeomError::RankDeficient { sigma })?;
    let shape = inv * second;
    let ishape = first * shape;
    let self_adjoint_residual = (ishape[(0, 1)] - ishape[(1, 0)]).abs();
    let det_i = first.determinant();
    let mean = 0.5 * (first[(0, 0)] * n + first[(1, 1)] * l - 2.0 * first[(0, 1)] * m) / det_i;
    let extrinsic = second.determinant() / det_i;
    let disc = (mean * mean - extrinsic).max(0.0).sqrt();
    let xi = model.xi();
    let nu = model.inner(p, &normal, &xi);
    let tangential = xi - normal * nu;
    let tn = model.inner(p, &tangential, &tangential);
    let gauss = ImmersedSurface::brioschi(model, &map, q, h, 2.0 * h)?;
    Ok(SurfaceGeometry {
        param: u,
        chart,
        point: p,
        first,
        second,
        normal,
        nu,
        tangential,
        shape,
        k1: mean - disc,
        k2: mean + disc,
        mean,
        extrinsic,
        gauss,
        unit_defect: (nu * nu + tn - 1.0).abs(),
        self_adjoint_residual,
    })
}

/// Geometry at every grid node, row-major in `(i, j)`.
pub fn sample_geometry(model: &SubmersionModel, surface: &ImmersedSurface) -> Vec<Result<SurfaceGeometry>> {
    use rayon::prelude::*;
    let [nu, nv] = surface.node_counts();
    (0..nu * nv)
        .into_par_iter()
        .map(|k| surface_geometry(model, surface, surface.node(k / nv, k % nv)))
        .collect()
}

/// Zeros of the angle function: sign changes of `ν` along grid edges refined
/// by bisection, plus nodes where `ν` already vanishes.
pub fn horizontal_normal_points(model: &SubmersionModel, surface: &ImmersedSurface) -> Result<Vec<[f64; 2]>> {
    let [nu, nv] = surface.node_counts();
    let xi = model.xi();
    let nu_at = |u: [f64; 2]| surface_normal(model, surface, u).map(|(p, n)| model.inner(p, &n, &xi));
    let vals: Vec<f64> = {
        use rayon::prelude::*;
        (0..nu * nv)
            .into_par_iter()
            .map(|k| nu_at(surface.node(k / nv, k % nv)))
            .collect::<Result<Vec<_>>>()?
    };
    let idx = |i: usize, j: usize| i * nv + j;
    let mut out = Vec::new();
    for i in 0..nu {
        for j in 0..nv {
            let a = vals[idx(i, j)];
            if a.abs() <= 1e-8 {
                out.push(surface.node(i, j));
                continue;
            }
            let mut nbrs = Vec::new();
            if i + 1 < nu {
                nbrs.push((i + 1, j));
            } else if surface.domain.periodic[0] {
                nbrs.push((0, j));
            }
            if j + 1 < nv {
                nbrs.push((i, j + 1));
            } else if surface.domain.periodic[1] {
                nbrs.push((i, 0));
            }
            for (k, l) in nbrs {
                let b = vals[idx(k, l)];
                if a * b < 0.0 && b.abs() > 1e-8 {
                    let pa = surface.node(i, j);
                    let mut pb = surface.node(k, l);
                    // periodic wrap
                    for ax in 0..2 {
                        let (lo, hi) = if ax == 0 { (surface.domain.u[0], surface.domain.u[1]) } else { (surface.domain.v[0], surface.domain.v[1]) };
                        if surface.domain.periodic[ax] && pb[ax] < pa[ax] {
                            pb[ax] += hi - lo;
                        }
                    }
                    let (mut lo, mut hi) = (0.0, 1.0);
                    let (mut flo, mut mid) = (a, pa);
                    for _ in 0..60 {
                        let t = 0.5 * (lo + hi);
                        mid = [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])];
                        let f = nu_at(mid)?;
                        if f.abs() <= 1e-10 {
                            break;
                        }
                        if f.signum() == flo.signum() {
                            lo = t;
                            flo = f;
                        } else {
                            hi = t;
                        }
                    }
                    out.push(mid);
                }
            }
        }
    }
    Ok(out)
}
