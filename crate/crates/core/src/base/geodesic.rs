use serde::Serialize;

use super::model::{wrap_pi, HadamardModel, Point2, Tangent2};
use crate::error::{GeomError, Result};
use crate::ode::{rk4_fixed, Dopri5};

/// One row of a path's sample table: arc length, position and chart direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSample {
    pub s: f64,
    pub point: Point2,
    pub psi: f64,
}

/// Arc-length flow of a curve with prescribed geodesic curvature, in the
/// state `(x, y, ψ)` where `ψ` is the chart direction of the velocity.
pub(crate) fn curve_rhs<'a, K>(model: &'a HadamardModel, k: K) -> impl Fn(f64, &[f64; 3]) -> Option<[f64; 3]> + 'a
where
    K: Fn(f64) -> f64 + 'a,
{
    let builtin = !matches!(model.kind(), super::model::ModelKind::Conformal(_));
    move |s, y| {
        let p = Point2::new(y[0], y[1]);
        if builtin {
            // rounding may push a saturated ray a hair outside the disk
            if model.domain() == super::model::ChartDomain::UnitDisk && p.x * p.x + p.y * p.y > 1.0 + 1e-9 {
                return None;
            }
        } else if !model.contains(p) {
            return None;
        }
        let il = model.inv_lambda(p);
        let g = model.grad_phi_scaled(p);
        let (sn, cs) = y[2].sin_cos();
        let out = [cs * il, sn * il, k(s) + cs * g[1] - sn * g[0]];
        if out.iter().all(|v| v.is_finite()) {
            Some(out)
        } else {
            None
        }
    }
}

fn integrator() -> Dopri5 {
    Dopri5::default()
}

fn exit_error(model: &HadamardModel, e: GeomError, last: [f64; 3]) -> GeomError {
    match e {
        GeomError::StepFailure { .. } => {
            let p = Point2::new(last[0], last[1]);
            let near_edge = match model.domain() {
                super::model::ChartDomain::UnitDisk => p.norm() > 1.0 - 1e-3,
                super::model::ChartDomain::Plane => false,
            };
            if near_edge || !model.is_complete() {
                GeomError::ChartExit { x: p.x, y: p.y }
            } else {
                e
            }
        }
        other => other,
    }
}

/// Flows the state `(p, ψ)` along arc length from `s0` to `s1` and returns the final state.
pub(crate) fn flow<K: Fn(f64) -> f64>(
    model: &HadamardModel,
    p: Point2,
    psi: f64,
    s0: f64,
    s1: f64,
    k: K,
) -> Result<(Point2, f64)> {
    let mut last = [p.x, p.y, psi];
    let r = integrator()
        .integrate(curve_rhs(model, k), s0, [p.x, p.y, psi], s1, None, |_, y| {
            last = *y;
            true
        })
        .map_err(|e| exit_error(model, e, last))?;
    Ok((Point2::new(r.y[0], r.y[1]), r.y[2]))
}

/// Flows like [`flow`] and records a sample after every accepted step.
pub(crate) fn flow_sampled<K: Fn(f64) -> f64>(
    model: &HadamardModel,
    p: Point2,
    psi: f64,
    s0: f64,
    s1: f64,
    spacing: f64,
    k: K,
) -> Result<Vec<PathSample>> {
    let mut out = vec![PathSample { s: s0, point: p, psi }];
    let mut last = [p.x, p.y, psi];
    let ig = Dopri5 {
        h_max: spacing,
        h_init: spacing.min(1e-2),
        ..integrator()
    };
    ig.integrate(curve_rhs(model, k), s0, [p.x, p.y, psi], s1, None, |s, y| {
        last = *y;
        out.push(PathSample {
            s,
            point: Point2::new(y[0], y[1]),
            psi: y[2],
        });
        true
    })
    .map_err(|e| exit_error(model, e, last))?;
    Ok(out)
}

/// Sample spacing (arc length) used when a caller does not ask for one.
pub const DEFAULT_SPACING: f64 = 0.02;

/// A geodesic segment with a dense, read-only sample table.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    model: HadamardModel,
    samples: Vec<PathSample>,
    origin: usize,
}

impl GeodesicPath {
    /// Traces the geodesic through `p` with chart direction `psi` over `[s_min, s_max]`.
    pub fn trace(model: &HadamardModel, p: Point2, psi: f64, s_min: f64, s_max: f64, spacing: f64) -> Result<Self> {
        if !(s_min <= 0.0 && s_max >= 0.0) {
            return Err(GeomError::InvalidInput(format!(
                "arc-length range [{s_min}, {s_max}] must contain 0"
            )));
        }
        if !model.contains(p) {
            return Err(GeomError::InvalidInput(format!("({}, {}) is outside the chart", p.x, p.y)));
        }
        let mut back = flow_sampled(model, p, psi, 0.0, s_min, spacing, |_| 0.0)?;
        let fwd = flow_sampled(model, p, psi, 0.0, s_max, spacing, |_| 0.0)?;
        back.reverse();
        let origin = back.len() - 1;
        back.extend_from_slice(&fwd[1..]);
        Ok(Self {
            model: model.clone(),
            samples: back,
            origin,
        })
    }

    pub fn model(&self) -> &HadamardModel {
        &self.model
    }

    pub fn samples(&self) -> &[PathSample] {
        &self.samples
    }

    /// The sample at arc length 0.
    pub fn initial(&self) -> PathSample {
        self.samples[self.origin]
    }

    pub fn first(&self) -> PathSample {
        self.samples[0]
    }

    pub fn last(&self) -> PathSample {
        *self.samples.last().unwrap()
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.first().s, self.last().s)
    }

    pub fn length(&self) -> f64 {
        self.last().s - self.first().s
    }

    pub fn tangent(&self, sample: &PathSample) -> Tangent2 {
        self.model.unit_tangent(sample.point, sample.psi)
    }

    /// Exact state at arc length `s`, re-integrated from the nearest stored sample.
    pub fn state_at(&self, s: f64) -> Result<PathSample> {
        let idx = self.samples.partition_point(|q| q.s < s);
        let near = match idx {
            0 => self.samples[0],
            i if i >= self.samples.len() => self.last(),
            i => {
                if (self.samples[i].s - s).abs() < (s - self.samples[i - 1].s).abs() {
                    self.samples[i]
                } else {
                    self.samples[i - 1]
                }
            }
        };
        if near.s == s {
            return Ok(near);
        }
        let (point, psi) = flow(&self.model, near.point, near.psi, near.s, s, |_| 0.0)?;
        Ok(PathSample { s, point, psi })
    }

    /// Same geodesic re-traced with a different sample spacing.
    pub fn resampled(&self, spacing: f64) -> Result<Self> {
        let o = self.initial();
        let (a, b) = self.s_range();
        Self::trace(&self.model, o.point, o.psi, a - o.s, b - o.s, spacing).map(|mut p| {
            for q in &mut p.samples {
                q.s += o.s;
            }
            p
        })
    }

    pub fn chart_polyline(&self) -> Vec<Point2> {
        self.samples.iter().map(|q| q.point).collect()
    }

    /// Audits the sample table against the second-order geodesic equation.
    ///
    /// Between consecutive samples the classical Christoffel system is
    /// integrated with fixed-step RK4 and compared with the next sample.
    /// Samples where `λ` exceeds `lambda_cap` are beyond what a double
    /// chart coordinate resolves and are counted as skipped.
    pub fn residual(&self, lambda_cap: f64) -> ResidualReport {
        let m = &self.model;
        let rhs = |_s: f64, y: &[f64; 4]| {
            let p = Point2::new(y[0], y[1]);
            if !m.contains(p) {
                return None;
            }
            let g = m.christoffel(p);
            let (u, v) = (y[2], y[3]);
            let acc = |k: usize| g[k][0][0] * u * u + 2.0 * g[k][0][1] * u * v + g[k][1][1] * v * v;
            Some([u, v, -acc(0), -acc(1)])
        };
        let mut rep = ResidualReport::default();
        for w in self.samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (la, lb) = (m.lambda(a.point), m.lambda(b.point));
            if !(la.is_finite() && lb.is_finite() && la <= lambda_cap && lb <= lambda_cap) {
                rep.skipped += 1;
                continue;
            }
            let ta = self.tangent(&a);
            let tb = self.tangent(&b);
            rep.max_speed_defect = rep.max_speed_defect.max((m.norm(&ta) - 1.0).abs());
            let ds = b.s - a.s;
            let n = ((ds.abs() / 2e-3).ceil() as usize).max(4);
            let Some(y) = rk4_fixed(rhs, a.s, [a.point.x, a.point.y, ta.u, ta.v], b.s, n) else {
                rep.skipped += 1;
                continue;
            };
            let pos = lb * (y[0] - b.point.x).hypot(y[1] - b.point.y);
            let vel = lb * (y[2] - tb.u).hypot(y[3] - tb.v);
            rep.max_residual = rep.max_residual.max(pos.max(vel));
            rep.checked += 1;
        }
        rep
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub max_speed_defect: f64,
    pub checked: usize,
    pub skipped: usize,
}

/// Traces the geodesic with initial velocity `v` for arc length `s_max`.
pub fn geodesic_trace(model: &HadamardModel, p: Point2, v: Tangent2, s_max: f64) -> Result<GeodesicPath> {
    if !(s_max > 0.0) {
        return Err(GeomError::InvalidInput(format!("s_max = {s_max} must be positive")));
    }
    let speed = model.norm(&v);
    if (speed - 1.0).abs() > 1e-8 {
        return Err(GeomError::NotUnitSpeed { speed });
    }
    GeodesicPath::trace(model, p, v.chart_angle(), 0.0, s_max, DEFAULT_SPACING.min(s_max))
}

/// Result of the two-point shooting problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    /// Chart direction at the start.
    pub psi_start: f64,
    /// Chart direction at the end.
    pub psi_end: f64,
    pub length: f64,
    /// Metric distance between the reached endpoint and the target.
    pub miss: f64,
    pub iterations: usize,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Which side of the complete geodesic through `p` with direction `psi` the
/// point `q` is on (+1 left, -1 right), judged at the chart-nearest sample.
fn side_of_line(model: &HadamardModel, p: Point2, psi: f64, q: Point2, reach: f64) -> Result<f64> {
    let spacing = reach / 150.0;
    let mut best = (f64::INFINITY, [0.0, 0.0], Point2::ORIGIN);
    for dir in [1.0, -1.0] {
        let samples = flow_sampled(model, p, psi, 0.0, dir * reach, spacing, |_| 0.0)?;
        for w in samples.windows(2) {
            let (a, b) = (w[0].point, w[1].point);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l2 = dx * dx + dy * dy;
            let t = if l2 > 0.0 {
                (((q.x - a.x) * dx + (q.y - a.y) * dy) / l2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let c = Point2::new(a.x + t * dx, a.y + t * dy);
            let d = c.dist(&q);
            if d < best.0 {
                let dir_vec = [dir * dx, dir * dy];
                best = (d, dir_vec, c);
            }
        }
    }
    let (_, t, c) = best;
    Ok(cross(t, [q.x - c.x, q.y - c.y]).signum())
}

/// Solves for the geodesic from `p` to `q`: bisection on the initial direction
/// followed by Newton on (direction, length).
pub fn shoot(model: &HadamardModel, p: Point2, q: Point2, budget: usize) -> Result<Shot> {
    if !model.contains(p) || !model.contains(q) {
        return Err(GeomError::InvalidInput("shooting endpoints must lie in the chart".into()));
    }
    if p == q {
        return Err(GeomError::InvalidInput("shooting endpoints coincide".into()));
    }
    let chord = model.chord_length(p, q);
    let reach = 1.5 * chord + 0.5;
    let psi_e = (q.y - p.y).atan2(q.x - p.x);
    let lq = model.lambda(q);
    let mut iters = 0usize;

    // bracket: the side function goes from +1 to -1 across the true direction
    let mut lo = psi_e - 1.5;
    let mut hi = psi_e + 1.5;
    let small = lq * p.dist(&q) < 1e-4;
    if !small {
        let (fl, fh) = (
            side_of_line(model, p, lo, q, reach)?,
            side_of_line(model, p, hi, q, reach)?,
        );
        iters += 2;
        if !(fl > 0.0 && fh < 0.0) {
            let n = 24;
            let grid: Vec<f64> = (0..=n)
                .map(|i| psi_e - std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64)
                .collect();
            let mut signs = Vec::with_capacity(grid.len());
            for &g in &grid {
                signs.push(side_of_line(model, p, g, q, reach)?);
                iters += 1;
            }
            let mut found = None;
            for i in 0..n {
                if signs[i] > 0.0 && signs[i + 1] < 0.0 {
                    let mid = 0.5 * (grid[i] + grid[i + 1]);
                    if found.map_or(true, |(_, m): (usize, f64)| wrap_pi(mid - psi_e).abs() < wrap_pi(m - psi_e).abs()) {
                        found = Some((i, mid));
                    }
                }
            }
            let (i, _) = found.ok_or(GeomError::NoConvergence {
                what: "shooting bracket",
                iterations: iters,
                residual: f64::NAN,
            })?;
            lo = grid[i];
            hi = grid[i + 1];
        }
        while hi - lo > 1e-3 && iters < budget {
            let mid = 0.5 * (lo + hi);
            if side_of_line(model, p, mid, q, reach)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            iters += 1;
        }
    }
    let mut psi = if small { psi_e } else { 0.5 * (lo + hi) };
    let mut len = chord;

    let end = |psi: f64, len: f64| flow(model, p, psi, 0.0, len, |_| 0.0);
    let miss = |e: Point2| lq * e.dist(&q);
    let (mut e, mut pe) = end(psi, len)?;
    let mut r = miss(e);
    while r > 1e-12 {
        if iters >= budget {
            return Err(GeomError::NoConvergence {
                what: "geodesic shooting",
                iterations: iters,
                residual: r,
            });
        }
        iters += 1;
        let h = 1e-7;
        let (ep, _) = end(psi + h, len)?;
        let (em, _) = end(psi - h, len)?;
        let il = model.inv_lambda(e);
        let j = [
            [(ep.x - em.x) / (2.0 * h), il * pe.cos()],
            [(ep.y - em.y) / (2.0 * h), il * pe.sin()],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return Err(GeomError::NoConvergence {
                what: "geodesic shooting (singular Jacobian)",
                iterations: iters,
                residual: r,
            });
        }
        let (fx, fy) = (e.x - q.x, e.y - q.y);
        let dpsi = -(j[1][1] * fx - j[0][1] * fy) / det;
        let dlen = -(-j[1][0] * fx + j[0][0] * fy) / det;
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let (np, nl) = (psi + t * dpsi, (len + t * dlen).max(0.5 * len));
            if let Ok((ne, npe)) = end(np, nl) {
                let nr = miss(ne);
                if nr < r {
                    psi = np;
                    len = nl;
                    e = ne;
                    pe = npe;
                    r = nr;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if r > 1e-9 {
        return Err(GeomError::NoConvergence {
            what: "geodesic shooting",
            iterations: iters,
            residual: r,
        });
    }
    Ok(Shot {
        psi_start: wrap_pi(psi),
        psi_end: pe,
        length: len,
        miss: r,
        iterations: iters,
    })
}

/// The geodesic from `p` to `q` and the distance between them.
pub fn connect(model: &HadamardModel, p: Point2, q: Point2) -> Result<(GeodesicPath, f64)> {
    let shot = shoot(model, p, q, 200)?;
    let spacing = DEFAULT_SPACING.min(shot.length / 8.0);
    let path = GeodesicPath::trace(model, p, shot.psi_start, 0.0, shot.length, spacing)?;
    Ok((path, shot.length))
}

/// Riemannian distance, by shooting.
pub fn distance(model: &HadamardModel, p: Point2, q: Point2) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    shoot(model, p, q, 200).map(|s| s.length)
}

/// The angle at `p` between the geodesics towards `q` and `r`, in `[0, π]`.
pub fn angle_at(model: &HadamardModel, p: Point2, q: Point2, r: Point2) -> Result<f64> {
    let a = shoot(model, p, q, 200)?;
    let b = shoot(model, p, r, 200)?;
    Ok(wrap_pi(a.psi_start - b.psi_start).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poincare_distance(p: Point2, q: Point2) -> f64 {
        let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
        (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh()
    }

    #[test]
    fn radial_geodesic_from_origin() {
        let m = HadamardModel::poincare();
        let v = m.unit_tangent(Point2::ORIGIN, 0.0);
        let g = geodesic_trace(&m, Point2::ORIGIN, v, 1.0).unwrap();
        let end = g.last().point;
        assert!((end.x - 0.5f64.tanh()).abs() < 1e-10);
        assert!(end.y.abs() < 1e-14);
        let rep = g.residual(1e6);
        assert!(rep.max_residual < 1e-8, "{rep:?}");
    }

    #[test]
    fn non_unit_initial_velocity_rejected() {
        let m = HadamardModel::poincare();
        let v = Tangent2::new(Point2::ORIGIN, 1.0, 0.0);
        assert!(matches!(
            geodesic_trace(&m, Point2::ORIGIN, v, 1.0),
            Err(GeomError::NotUnitSpeed { .. })
        ));
    }

    #[test]
    fn shooting_matches_closed_form() {
        let m = HadamardModel::poincare();
        let pairs = [
            (Point2::ORIGIN, Point2::new(0.5, 0.0)),
            (Point2::new(0.3, 0.4), Point2::new(-0.6, 0.2)),
            (Point2::new(0.9, 0.0), Point2::new(0.0, 0.9)),
            (Point2::new(-0.95, 0.1), Point2::new(0.9, -0.3)),
        ];
        for (p, q) in pairs {
            let d = distance(&m, p, q).unwrap();
            assert!((d - poincare_distance(p, q)).abs() < 1e-8, "{p:?} {q:?} {d}");
        }
    }

    #[test]
    fn scaled_model_distances_scale() {
        let m = HadamardModel::scaled_poincare(2.0);
        let (p, q) = (Point2::new(0.1, -0.2), Point2::new(-0.4, 0.5));
        let d = distance(&m, p, q).unwrap();
        assert!((d - poincare_distance(p, q) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn right_angle_at_origin() {
        let m = HadamardModel::poincare();
        let a = angle_at(&m, Point2::ORIGIN, Point2::new(0.5, 0.0), Point2::new(0.0, 0.5)).unwrap();
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn state_at_reintegrates() {
        let m = HadamardModel::poincare();
        let g = GeodesicPath::trace(&m, Point2::new(0.0, 0.3), 0.2, -2.0, 3.0, 0.1).unwrap();
        let s = g.state_at(1.234).unwrap();
        let (p, psi) = flow(&m, Point2::new(0.0, 0.3), 0.2, 0.0, 1.234, |_| 0.0).unwrap();
        assert!(s.point.dist(&p) < 1e-11 && (s.psi - psi).abs() < 1e-11);
    }
}
