use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::plane::{node_points, section_curves, IntersectionCurve, PlaneFoliation, VerticalPlane};
use super::tilt::{tilt_classify, Tilt};
use super::convexity::convexity_check;
use crate::base::{ideal_geodesic, ideal_point, shoot, wrap_2pi, wrap_pi, HadamardModel, IdealPoint, ModelKind, Point2};
use crate::error::Result;
use crate::submersion::{Point3, SubmersionModel};
use crate::surface::{horizontal_normal_points, surface_normal, ImmersedSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Sphere,
    PlaneKillingGraph,
    PlaneSimpleEnd,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSettings {
    /// Sections with a larger plane diameter do not count as compact.
    pub diameter_cap: f64,
    /// Curvature margin for strict convexity of sections.
    pub convexity_margin: f64,
    /// `|ν|` above this everywhere means no horizontal normal.
    pub nu_margin: f64,
    /// Angular tolerance for end-angle estimates.
    pub end_tolerance: f64,
    /// Offset of the rotating planes of the secondary sweep from the ends of
    /// the first non-compact slice.
    pub secondary_offset: f64,
    pub secondary_steps: usize,
    /// Sections closer to tangency than this are perturbed.
    pub transversality: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            diameter_cap: 50.0,
            convexity_margin: 1e-4,
            nu_margin: 1e-6,
            end_tolerance: 0.05,
            secondary_offset: 0.1,
            secondary_steps: 24,
            transversality: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceSummary {
    pub t: f64,
    pub components: usize,
    pub compact: Vec<bool>,
    pub diameters: Vec<f64>,
    pub convex: Vec<bool>,
    pub transversality: f64,
    /// Index of the followed component.
    pub tracked: Option<usize>,
    /// The plane was moved off a near-tangency.
    pub perturbed: bool,
    pub skipped: bool,
}

/// Evidence from the first slice whose followed component is not compact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondarySweep {
    pub t_bar: f64,
    pub tilt: Option<Tilt>,
    /// Ideal angles of the two ends of the non-compact section.
    pub end_angles: [f64; 2],
    pub single_ideal_point: bool,
    pub pivot: f64,
    pub free_range: [f64; 2],
    pub planes: usize,
    pub noncompact_planes: usize,
    pub skipped_planes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub classification: Classification,
    /// 0 when the angle function never vanishes, 1 when the sweep ran.
    pub stage: u8,
    pub min_abs_nu: f64,
    pub horizontal_normal_points: Vec<[f64; 2]>,
    pub slices: Vec<SliceSummary>,
    /// The grid was traversed backwards (the sweep runs along `−β`).
    pub reversed: bool,
    pub end_angle: Option<f64>,
    pub projection_injective: Option<bool>,
    pub projection_convex: Option<bool>,
    pub secondary: Option<SecondarySweep>,
    pub evidence: Vec<String>,
}

impl SweepReport {
    fn new() -> Self {
        Self {
            classification: Classification::Inconclusive,
            stage: 0,
            min_abs_nu: f64::NAN,
            horizontal_normal_points: Vec::new(),
            slices: Vec::new(),
            reversed: false,
            end_angle: None,
            projection_injective: None,
            projection_convex: None,
            secondary: None,
            evidence: Vec::new(),
        }
    }

    fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.classification = Classification::Inconclusive;
        self.evidence.push(why.into());
        self
    }
}

/// Ideal point of the ray from the basepoint through `p`, as an angle at the
/// basepoint. Exact for far points in the limit.
pub(crate) fn seen_from_basepoint(model: &HadamardModel, p: Point2) -> Result<f64> {
    if model.is_radial() {
        return Ok(wrap_2pi(p.angle()));
    }
    Ok(wrap_2pi(shoot(model, model.basepoint(), p, 200)?.psi_start))
}

/// Smallest arc containing all angles: `(midpoint, width)`.
pub(crate) fn angular_hull(angles: &[f64]) -> (f64, f64) {
    if angles.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mut a: Vec<f64> = angles.iter().map(|x| wrap_2pi(*x)).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    let (mut gap, mut after) = (a[0] + TAU - a[n - 1], a[0]);
    for w in a.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            after = w[1];
        }
    }
    let width = TAU - gap;
    (wrap_2pi(after + 0.5 * width), width)
}

fn forward_end(model: &HadamardModel, p: Point2, psi: f64) -> Result<IdealPoint> {
    ideal_point(model, p, model.unit_tangent(p, psi))
}

enum Outcome {
    Vanished(usize),
    Persists(usize),
    NonCompact(usize),
}

struct Slice {
    t: f64,
    curves: Vec<IntersectionCurve>,
    perturbed: bool,
    skipped: bool,
}

fn chart_gap(a: &IntersectionCurve, b: &IntersectionCurve) -> f64 {
    let mut best = f64::INFINITY;
    for p in &a.points {
        for q in &b.points {
            best = best.min((p.coords() - q.coords()).norm());
        }
    }
    best
}

fn chart_step(c: &IntersectionCurve) -> f64 {
    c.points.windows(2).map(|w| (w[0].coords() - w[1].coords()).norm()).fold(0.0, f64::max)
}

/// Stage 0: a surface whose angle function never vanishes is a Killing
/// graph; its projection must be injective and, on Poincaré bases, convex
/// (checked in the Klein model, where geodesics are chords).
fn graph_stage(model: &SubmersionModel, surface: &ImmersedSurface, pts: &[Option<Point3>], mut rep: SweepReport) -> SweepReport {
    let [nu, nv] = surface.node_counts();
    let dom = surface.domain;
    let base = |i: usize, j: usize| pts[(i % nu) * nv + (j % nv)].map(|p| p.base());
    // local injectivity: projected cells keep one orientation
    let mut signs = [0usize; 2];
    let ci = if dom.periodic[0] { nu } else { nu - 1 };
    let cj = if dom.periodic[1] { nv } else { nv - 1 };
    for i in 0..ci {
        for j in 0..cj {
            let c = [base(i, j), base(i + 1, j), base(i + 1, j + 1), base(i, j + 1)];
            let Some(c) = c.into_iter().collect::<Option<Vec<_>>>() else {
                return rep.inconclusive("surface leaves the chart at a grid node");
            };
            let area: f64 = (0..4).map(|k| c[k].x * c[(k + 1) % 4].y - c[(k + 1) % 4].x * c[k].y).sum();
            if area.abs() > 1e-14 {
                signs[usize::from(area > 0.0)] += 1;
            }
        }
    }
    // boundary loop of the parameter domain
    let ring: Vec<(usize, usize)> = if dom.periodic[1] && !dom.periodic[0] && !dom.window_edges[0] && dom.window_edges[1] {
        (0..nv).map(|j| (nu - 1, j)).collect()
    } else if !dom.periodic[0] && !dom.periodic[1] {
        let mut r: Vec<(usize, usize)> = (0..nu).map(|i| (i, 0)).collect();
        r.extend((1..nv).map(|j| (nu - 1, j)));
        r.extend((0..nu - 1).rev().map(|i| (i, nv - 1)));
        r.extend((1..nv - 1).rev().map(|j| (0, j)));
        r
    } else {
        rep.projection_injective = Some(signs[0] == 0 || signs[1] == 0);
        return rep.inconclusive("no boundary loop for this parameter domain; projection convexity unchecked");
    };
    let Some(poly) = ring.iter().map(|&(i, j)| base(i, j)).collect::<Option<Vec<_>>>() else {
        return rep.inconclusive("boundary leaves the chart");
    };
    let n = poly.len();
    let seg_cross = |a: Point2, b: Point2, c: Point2, d: Point2| {
        let o = |p: Point2, q: Point2, r: Point2| (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0
    };
    let mut simple = true;
    'outer: for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if seg_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) {
                simple = false;
                break 'outer;
            }
        }
    }
    let injective = (signs[0] == 0 || signs[1] == 0) && simple;
    rep.projection_injective = Some(injective);
    rep.evidence.push(format!(
        "projected cells: {} positive, {} negative; boundary loop simple: {simple}",
        signs[1], signs[0]
    ));
    let convex = match model.base().kind() {
        ModelKind::Poincare { .. } => {
            let k: Vec<[f64; 2]> = poly
                .iter()
                .map(|p| {
                    let s = 2.0 / (1.0 + p.x * p.x + p.y * p.y);
                    [s * p.x, s * p.y]
                })
                .collect();
            let mut turn = [0usize; 2];
            for i in 0..n {
                let (a, b, c) = (k[i], k[(i + 1) % n], k[(i + 2) % n]);
                let cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                if cr.abs() > 1e-15 {
                    turn[usize::from(cr > 0.0)] += 1;
                }
            }
            Some(turn[0] == 0 || turn[1] == 0)
        }
        _ => None,
    };
    rep.projection_convex = convex;
    match (injective, convex) {
        (true, Some(true)) => {
            rep.classification = Classification::PlaneKillingGraph;
            rep
        }
        (true, None) => rep.inconclusive("projection convexity is only certified on Poincaré bases"),
        _ => rep.inconclusive("projection is not injective or not convex"),
    }
}

/// Classifies a surface by the oriented sweep of vertical planes along `β`.
pub fn sweep_classify(
    model: &SubmersionModel,
    surface: &ImmersedSurface,
    foliation: &PlaneFoliation,
    settings: &SweepSettings,
) -> SweepReport {
    let mut rep = SweepReport::new();
    let [nu, nv] = surface.node_counts();
    let xi = model.xi();
    let nus: Vec<Option<f64>> = (0..nu * nv)
        .into_par_iter()
        .map(|k| {
            surface_normal(model, surface, surface.node(k / nv, k % nv))
                .ok()
                .map(|(p, n)| model.inner(p, &n, &xi))
        })
        .collect();
    let Some(nus) = nus.into_iter().collect::<Option<Vec<f64>>>() else {
        return rep.inconclusive("angle function could not be evaluated at every node");
    };
    rep.min_abs_nu = nus.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let one_sign = nus.iter().all(|v| *v > 0.0) || nus.iter().all(|v| *v < 0.0);
    let pts = node_points(model, surface);
    if one_sign && rep.min_abs_nu > settings.nu_margin {
        rep.evidence.push(format!("stage 0: |ν| ≥ {:.3e} at every node", rep.min_abs_nu));
        return graph_stage(model, surface, &pts, rep);
    }
    rep.stage = 1;
    match horizontal_normal_points(model, surface) {
        Ok(h) => rep.horizontal_normal_points = h,
        Err(e) => rep.evidence.push(format!("horizontal normal search failed: {e}")),
    }
    if pts.iter().any(|p| p.is_none()) {
        return rep.inconclusive("surface leaves the chart at a grid node");
    }
    let base = model.base();
    let beta = foliation.beta;
    let fermi: Vec<Option<(f64, f64)>> = pts.par_iter().map(|p| beta.to_fermi(base, p.unwrap().base()).ok()).collect();

    let grid = &foliation.t_grid;
    let step_at = |k: usize| {
        if grid.len() < 2 {
            1.0
        } else if k + 1 < grid.len() {
            grid[k + 1] - grid[k]
        } else {
            grid[k] - grid[k - 1]
        }
    };
    let run_slice = |t: f64| -> Result<(VerticalPlane, Vec<IntersectionCurve>)> {
        let plane = foliation.plane(model, t)?;
        let vals: Vec<f64> = fermi.iter().map(|f| f.map_or(f64::NAN, |(s, _)| s - t)).collect();
        let level = |p: Point2| -> Result<(f64, f64)> {
            let (s, d) = beta.to_fermi(base, p)?;
            Ok((s - t, d))
        };
        let curves = section_curves(model, surface, &plane, &vals, &level)?;
        Ok((plane, curves))
    };
    let slices: Vec<Slice> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let t = grid[k];
            let tangent = |c: &[IntersectionCurve]| c.iter().any(|c| c.transversality < settings.transversality);
            match run_slice(t) {
                Ok((_, c)) if !tangent(&c) => Slice { t, curves: c, perturbed: false, skipped: false },
                _ => {
                    let t2 = t + 0.25 * step_at(k);
                    match run_slice(t2) {
                        Ok((_, c)) if !tangent(&c) => Slice { t: t2, curves: c, perturbed: true, skipped: false },
                        _ => Slice { t, curves: Vec::new(), perturbed: true, skipped: true },
                    }
                }
            }
        })
        .collect();
    rep.slices = slices
        .iter()
        .map(|s| SliceSummary {
            t: s.t,
            components: s.curves.len(),
            compact: s.curves.iter().map(|c| c.is_compact(settings.diameter_cap)).collect(),
            diameters: s.curves.iter().map(|c| c.diameter).collect(),
            convex: s.curves.iter().map(|c| convexity_check(c, settings.convexity_margin).passes).collect(),
            transversality: s.curves.iter().map(|c| c.transversality).fold(1.0, f64::min),
            tracked: None,
            perturbed: s.perturbed,
            skipped: s.skipped,
        })
        .collect();
    let skipped = slices.iter().filter(|s| s.skipped).count();
    if skipped > 0 {
        rep.evidence.push(format!("{skipped} slices skipped after persistent tangency"));
    }

    let n = slices.len();
    let nonempty = |k: usize| !slices[k].curves.is_empty();
    let mut order: Vec<usize> = (0..n).collect();
    if n == 0 || !(0..n).any(nonempty) {
        return rep.inconclusive("no slice meets the surface");
    }
    if nonempty(0) && nonempty(n - 1) {
        return rep.inconclusive("the foliation grid does not start outside the surface at either end");
    }
    if nonempty(0) {
        order.reverse();
        rep.reversed = true;
        rep.evidence.push("sweeping along −β: the grid starts inside the surface".into());
    }
    let k0 = order.iter().position(|&k| nonempty(k)).unwrap();
    let first = order[k0];
    if slices[first].curves.len() != 1 {
        return rep.inconclusive(format!("{} components at first contact (t = {})", slices[first].curves.len(), slices[first].t));
    }
    let mut tracked = 0usize;
    let mut path: Vec<(usize, usize)> = vec![(first, 0)];
    let mut untracked = 0usize;
    let mut outcome = None;
    for w in order[k0..].windows(2) {
        let (ka, kb) = (w[0], w[1]);
        let cur = &slices[ka].curves[tracked];
        if !cur.is_compact(settings.diameter_cap) {
            outcome = Some(Outcome::NonCompact(ka));
            break;
        }
        if slices[kb].skipped {
            return rep.inconclusive(format!("slice t = {} skipped while tracking", slices[kb].t));
        }
        let dt = (slices[kb].t - slices[ka].t).abs();
        let il = cur.points.iter().map(|p| base.inv_lambda(p.base())).fold(0.0, f64::max);
        let matches: Vec<usize> = slices[kb]
            .curves
            .iter()
            .enumerate()
            .filter(|(_, c)| chart_gap(cur, c) < 4.0 * (chart_step(cur).max(chart_step(c)) + dt * il))
            .map(|(i, _)| i)
            .collect();
        let others = slices[ka].curves.len() - 1;
        untracked += others;
        match matches.len() {
            0 => {
                outcome = Some(Outcome::Vanished(ka));
                break;
            }
            1 => {
                let m = matches[0];
                let merged = slices[ka].curves.iter().enumerate().any(|(i, c)| {
                    i != tracked && chart_gap(c, &slices[kb].curves[m]) < 4.0 * (chart_step(c) + dt * il)
                });
                if merged {
                    return rep.inconclusive(format!("components merge between t = {} and t = {}", slices[ka].t, slices[kb].t));
                }
                tracked = m;
                path.push((kb, m));
            }
            _ => return rep.inconclusive(format!("tracked component splits between t = {} and t = {}", slices[ka].t, slices[kb].t)),
        }
    }
    for &(k, i) in &path {
        rep.slices[k].tracked = Some(i);
    }
    let last = *path.last().unwrap();
    let outcome = outcome.unwrap_or_else(|| {
        let c = &slices[last.0].curves[last.1];
        if c.is_compact(settings.diameter_cap) {
            Outcome::Persists(last.0)
        } else {
            Outcome::NonCompact(last.0)
        }
    });
    match outcome {
        Outcome::Vanished(k) => {
            let later: usize = order.iter().skip_while(|&&j| j != k).skip(1).map(|&j| slices[j].curves.len()).sum();
            untracked += later;
            let diams: Vec<f64> = path.iter().rev().take(3).map(|&(k, i)| slices[k].curves[i].diameter).collect();
            let peak = path.iter().map(|&(k, i)| slices[k].curves[i].diameter).fold(0.0, f64::max);
            let shrinking = diams.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-9)) && diams[0] < 0.5 * peak;
            if untracked > 0 {
                return rep.inconclusive(format!("{untracked} untracked section components"));
            }
            if !shrinking {
                return rep.inconclusive("tracked component vanished without shrinking to a point");
            }
            rep.evidence.push(format!(
                "tracked section compact on {} slices; born at t = {}, shrank to a point by t = {}",
                path.len(),
                slices[first].t,
                slices[k].t
            ));
            rep.classification = Classification::Sphere;
            rep
        }
        Outcome::Persists(k) => {
            let dir = if rep.reversed { beta.reversed() } else { beta };
            let beta_end = match forward_end(base, dir.origin, dir.psi) {
                Ok(x) => x,
                Err(e) => return rep.inconclusive(format!("forward end of β: {e}")),
            };
            let angles = |c: &IntersectionCurve| -> Result<Vec<f64>> { c.points.iter().map(|p| seen_from_basepoint(base, p.base())).collect() };
            let (mid, width) = match angles(&slices[k].curves[last.1]) {
                Ok(a) => angular_hull(&a),
                Err(e) => return rep.inconclusive(format!("end angle estimate failed: {e}")),
            };
            rep.end_angle = Some(mid);
            rep.evidence.push(format!(
                "tracked section compact through the grid end; last slice spans {width:.3e} rad about {mid:.6}; β end at {:.6}",
                beta_end.angle()
            ));
            if width < settings.end_tolerance && IdealPoint::new(mid).separation(&beta_end) < settings.end_tolerance {
                rep.classification = Classification::PlaneSimpleEnd;
                rep
            } else {
                rep.inconclusive("sections stay compact but the grid ends before they reach the end of β")
            }
        }
        Outcome::NonCompact(k) => {
            let i = path.iter().find(|p| p.0 == k).unwrap().1;
            secondary_sweep(model, surface, foliation, settings, &slices[k], i, rep)
        }
    }
}

/// Case of a followed section that stops being compact: its tilt and ideal
/// endpoints are recorded, then planes rotating about the far end of its
/// plane sweep the rest of the surface.
fn secondary_sweep(
    model: &SubmersionModel,
    surface: &ImmersedSurface,
    foliation: &PlaneFoliation,
    settings: &SweepSettings,
    slice: &Slice,
    idx: usize,
    mut rep: SweepReport,
) -> SweepReport {
    let base = model.base();
    let c = &slice.curves[idx];
    let tilt = match tilt_classify(c, settings.convexity_margin) {
        Ok(t) => Some(t),
        Err(e) => {
            rep.evidence.push(format!("tilt at t = {}: {e}", slice.t));
            None
        }
    };
    let ends = (|| -> Result<[f64; 2]> {
        Ok([
            seen_from_basepoint(base, c.points[0].base())?,
            seen_from_basepoint(base, c.points[c.len() - 1].base())?,
        ])
    })();
    let Ok(ends) = ends else {
        return rep.inconclusive("ideal angles of the non-compact section failed");
    };
    let single = IdealPoint::new(ends[0]).separation(&IdealPoint::new(ends[1])) < settings.end_tolerance;
    let theta_c = angular_hull(&ends).0;
    let mut ev = SecondarySweep {
        t_bar: slice.t,
        tilt,
        end_angles: ends,
        single_ideal_point: single,
        pivot: f64::NAN,
        free_range: [f64::NAN; 2],
        planes: 0,
        noncompact_planes: 0,
        skipped_planes: 0,
    };
    if tilt != Some(Tilt::Tilted) {
        rep.secondary = Some(ev);
        return rep.inconclusive(format!("first non-compact section at t = {} is not certified tilted", slice.t));
    }
    if !single {
        rep.secondary = Some(ev);
        return rep.inconclusive("non-compact section has two ideal endpoints");
    }
    let plane = match foliation.plane(model, slice.t) {
        Ok(p) => p.geodesic,
        Err(e) => return rep.inconclusive(format!("plane at t̄: {e}")),
    };
    let dir_beta = if rep.reversed { foliation.beta.reversed() } else { foliation.beta };
    let e = (|| -> Result<[f64; 3]> {
        Ok([
            forward_end(base, plane.origin, plane.psi)?.angle(),
            forward_end(base, plane.origin, plane.psi + PI)?.angle(),
            forward_end(base, dir_beta.origin, dir_beta.psi)?.angle(),
        ])
    })();
    let Ok([ef, eb, ahead]) = e else {
        return rep.inconclusive("ideal endpoints of the slice plane failed");
    };
    let theta_p = if wrap_pi(ef - theta_c).abs() < wrap_pi(eb - theta_c).abs() { eb } else { ef };
    // the unswept side's ideal arc runs from θ_c to θ_p through the end of β
    let span = wrap_2pi(theta_p - theta_c);
    let sgn = if wrap_2pi(ahead - theta_c) < span { 1.0 } else { -1.0 };
    let arc = if sgn > 0.0 { span } else { TAU - span };
    let d0 = settings.secondary_offset;
    let pivot = theta_p + sgn * d0;
    let (f0, f1) = (theta_c + sgn * d0, theta_c + sgn * (arc - 2.0 * d0));
    ev.pivot = wrap_2pi(pivot);
    ev.free_range = [wrap_2pi(f0), wrap_2pi(f1)];
    let m = settings.secondary_steps.max(2);
    let results: Vec<Option<bool>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let free = f0 + (f1 - f0) * k as f64 / (m - 1) as f64;
            let g = ideal_geodesic(base, IdealPoint::new(free), IdealPoint::new(pivot)).ok()?;
            let plane = VerticalPlane::from_oriented(&g);
            let curves = super::plane::intersect(model, surface, &plane).ok()?;
            Some(curves.iter().all(|c| c.is_compact(settings.diameter_cap)))
        })
        .collect();
    ev.planes = m;
    ev.skipped_planes = results.iter().filter(|r| r.is_none()).count();
    ev.noncompact_planes = results.iter().filter(|r| **r == Some(false)).count();
    let ok = ev.noncompact_planes == 0 && ev.skipped_planes * 4 < m;
    rep.secondary = Some(ev);
    if ok {
        rep.end_angle = Some(theta_c);
        rep.evidence.push(format!(
            "section at t = {} tilted with one ideal endpoint {theta_c:.6}; rotating planes meet the surface in compact sections",
            slice.t
        ));
        rep.classification = Classification::PlaneSimpleEnd;
        rep
    } else {
        rep.inconclusive("a rotating plane of the secondary sweep meets the surface in a non-compact section")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_angles() {
        let (m, w) = angular_hull(&[6.2, 0.1, 0.05]);
        assert!((w - (0.1 + TAU - 6.2)).abs() < 1e-12);
        assert!(wrap_pi(m - 0.5 * (0.1 + 6.2 - TAU)).abs() < 1e-12);
    }
}
