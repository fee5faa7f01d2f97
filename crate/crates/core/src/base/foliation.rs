use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::geodesic::{shoot, GeodesicPath};
use super::ideal::{ideal_geodesic, IdealPoint, OrientedGeodesic};
use super::model::{wrap_pi, HadamardModel, Point2};
use crate::error::{GeomError, Result};

/// Closest point of a geodesic to an outside point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Foot {
    pub s: f64,
    pub point: Point2,
    pub distance: f64,
    /// `|angle − π/2|` between the geodesic and the perpendicular, radians.
    pub orthogonality: f64,
}

/// Distance from `p` to `α(s)` and its derivative in `s`.
fn distance_and_slope(path: &GeodesicPath, p: Point2, s: f64) -> Result<(f64, f64, f64)> {
    let st = path.state_at(s)?;
    let model = path.model();
    if model.lambda(p) * st.point.dist(&p) < 1e-12 {
        return Ok((0.0, 0.0, FRAC_PI_2));
    }
    let shot = shoot(model, st.point, p, 200)?;
    let angle = wrap_pi(shot.psi_start - st.psi).abs();
    // first variation: d/ds d(α(s), p) = −cos(angle)
    Ok((shot.length, -angle.cos(), angle))
}

/// The foot of the perpendicular from `p` to `alpha`: golden-section search on
/// the distance along the path followed by a secant solve of its slope.
pub fn foot_of_perpendicular(alpha: &GeodesicPath, p: Point2) -> Result<Foot> {
    let (s_min, s_max) = alpha.s_range();
    let near = alpha
        .samples()
        .iter()
        .min_by(|a, b| a.point.dist(&p).total_cmp(&b.point.dist(&p)))
        .copied()
        .unwrap();
    let mut lo = (near.s - 1.0).max(s_min);
    let mut hi = (near.s + 1.0).min(s_max);
    let d = |s: f64| distance_and_slope(alpha, p, s).map(|v| v.0);
    // distance to a geodesic is convex, so widen until the ends climb
    for _ in 0..40 {
        let (dl, dh) = (d(lo)?, d(hi)?);
        let dm = d(0.5 * (lo + hi))?;
        let grow_lo = dl <= dm && lo > s_min;
        let grow_hi = dh <= dm && hi < s_max;
        if !grow_lo && !grow_hi {
            break;
        }
        if grow_lo {
            lo = (lo - (hi - lo)).max(s_min);
        }
        if grow_hi {
            hi = (hi + (hi - lo)).min(s_max);
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (d(c)?, d(e)?);
    let mut iters = 0;
    while b - a > 1e-3 {
        iters += 1;
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = d(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = d(e)?;
        }
    }
    let mut s0 = a;
    let mut s1 = b;
    let (_, mut g0, _) = distance_and_slope(alpha, p, s0)?;
    let (mut dist, mut g1, mut angle) = distance_and_slope(alpha, p, s1)?;
    let mut s = s1;
    while g1.abs() > 1e-13 && iters < 200 {
        iters += 1;
        if (g1 - g0).abs() < 1e-300 {
            break;
        }
        let next = (s1 - g1 * (s1 - s0) / (g1 - g0)).clamp(lo, hi);
        s0 = s1;
        g0 = g1;
        s1 = next;
        let v = distance_and_slope(alpha, p, s1)?;
        dist = v.0;
        g1 = v.1;
        angle = v.2;
        s = s1;
        if (s1 - s0).abs() < 1e-14 {
            break;
        }
    }
    if g1.abs() > 1e-7 {
        return Err(GeomError::NoConvergence {
            what: "perpendicular foot",
            iterations: iters,
            residual: g1.abs(),
        });
    }
    let point = alpha.state_at(s)?.point;
    Ok(Foot {
        s,
        point,
        distance: dist,
        orthogonality: (angle - FRAC_PI_2).abs(),
    })
}

/// Geodesics through `alpha(s)` orthogonal to `alpha`, one per grid value.
/// Each leaf is traced for `half_length` on both sides with the given spacing.
pub fn foliation_orthogonal(
    alpha: &GeodesicPath,
    s_grid: &[f64],
    half_length: f64,
    spacing: f64,
) -> Result<Vec<GeodesicPath>> {
    if s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeomError::InvalidInput("leaf grid must be strictly increasing".into()));
    }
    s_grid
        .iter()
        .map(|&s| {
            let st = alpha.state_at(s)?;
            GeodesicPath::trace(alpha.model(), st.point, st.psi + FRAC_PI_2, -half_length, half_length, spacing)
        })
        .collect()
}

/// Geodesics from the ideal point `x0` to each grid point.
pub fn foliation_from_infinity(
    model: &HadamardModel,
    x0: IdealPoint,
    grid: &[IdealPoint],
) -> Result<Vec<OrientedGeodesic>> {
    if grid.iter().any(|y| *y == x0) {
        return Err(GeomError::InvalidInput("leaf endpoints must differ from x0".into()));
    }
    grid.iter().map(|&y| ideal_geodesic(model, x0, y)).collect()
}

/// Witness that a family of leaves is pairwise disjoint inside a chart window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeafSeparation {
    /// Smallest metric distance between the polylines of two distinct leaves.
    pub min_distance: f64,
    pub closest_pair: (usize, usize),
    /// Largest metric gap between consecutive samples of one leaf.
    pub resolution: f64,
    /// Bound on how far a polyline strays from its smooth leaf.
    pub chord_error: f64,
}

impl LeafSeparation {
    /// Passes when every pair is further apart than four chord errors, so the
    /// smooth leaves cannot meet between samples.
    pub fn disjoint(&self) -> bool {
        self.min_distance > 4.0 * self.chord_error
    }
}

struct Block {
    lo: [f64; 2],
    hi: [f64; 2],
    pts: Vec<Point2>,
}

struct Extent {
    resolution: f64,
    chord_error: f64,
}

fn blocks(model: &HadamardModel, pts: &[Point2], window: f64, ext: &mut Extent) -> Vec<Block> {
    let inside: Vec<Vec<Point2>> = {
        let mut runs = vec![Vec::new()];
        for p in pts {
            if p.norm() <= window {
                runs.last_mut().unwrap().push(*p);
            } else if !runs.last().unwrap().is_empty() {
                runs.push(Vec::new());
            }
        }
        runs
    };
    let mut out = Vec::new();
    for run in inside.into_iter().filter(|r| r.len() >= 2) {
        for w in run.windows(2) {
            ext.resolution = ext.resolution.max(model.lambda(midpoint(&w[0], &w[1])) * w[0].dist(&w[1]));
        }
        // sagitta of an arc with chord ℓ turning by θ is about ℓθ/8; doubled for slack
        for w in run.windows(3) {
            let (a, b) = (sub(&w[1], &w[0]), sub(&w[2], &w[1]));
            let turn = (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]).abs();
            let l = w[0].dist(&w[1]).max(w[1].dist(&w[2]));
            ext.chord_error = ext.chord_error.max(model.lambda(w[1]) * l * turn / 4.0);
        }
        // blocks overlap by one point so every segment lives in some block
        let mut i = 0;
        while i + 1 < run.len() {
            let chunk = &run[i..(i + 65).min(run.len())];
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for p in chunk {
                lo = [lo[0].min(p.x), lo[1].min(p.y)];
                hi = [hi[0].max(p.x), hi[1].max(p.y)];
            }
            out.push(Block {
                lo,
                hi,
                pts: chunk.to_vec(),
            });
            i += 64;
        }
    }
    out
}

fn midpoint(p: &Point2, q: &Point2) -> Point2 {
    Point2::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
}

fn sub(p: &Point2, q: &Point2) -> [f64; 2] {
    [p.x - q.x, p.y - q.y]
}

fn point_segment(p: &Point2, a: &Point2, b: &Point2) -> (f64, Point2) {
    let (d, e) = (sub(b, a), sub(p, a));
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 > 0.0 { ((e[0] * d[0] + e[1] * d[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let c = Point2::new(a.x + s * d[0], a.y + s * d[1]);
    (p.dist(&c), c)
}

/// Chart distance between two segments and a point between the closest pair.
fn segment_segment(a0: &Point2, a1: &Point2, b0: &Point2, b1: &Point2) -> (f64, Point2) {
    let cross = |o: &Point2, p: &Point2, q: &Point2| {
        let (u, v) = (sub(p, o), sub(q, o));
        u[0] * v[1] - u[1] * v[0]
    };
    let (d1, d2) = (cross(a0, a1, b0), cross(a0, a1, b1));
    let (d3, d4) = (cross(b0, b1, a0), cross(b0, b1, a1));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let s = d1 / (d1 - d2);
        return (0.0, Point2::new(b0.x + s * (b1.x - b0.x), b0.y + s * (b1.y - b0.y)));
    }
    [
        (point_segment(a0, b0, b1), *a0),
        (point_segment(a1, b0, b1), *a1),
        (point_segment(b0, a0, a1), *b0),
        (point_segment(b1, a0, a1), *b1),
    ]
    .into_iter()
    .map(|((d, c), p)| (d, midpoint(&c, &p)))
    .min_by(|x, y| x.0.total_cmp(&y.0))
    .unwrap()
}

/// Pairwise separation of leaves restricted to the chart window `|p| ≤ window`.
///
/// Leaves are treated as polylines; the metric distance of two nearby
/// segments is `λ(midpoint)·(chart distance)`.
pub fn leaf_separation(model: &HadamardModel, leaves: &[Vec<Point2>], window: f64) -> LeafSeparation {
    let mut ext = Extent {
        resolution: 0.0,
        chord_error: 0.0,
    };
    let bl: Vec<Vec<Block>> = leaves.iter().map(|l| blocks(model, l, window, &mut ext)).collect();
    let lam_min = {
        // λ is smallest at the centre for every disk model we ship; sample to be safe
        let mut m = f64::INFINITY;
        for i in 0..=16 {
            for j in 0..32 {
                let p = Point2::polar(window * i as f64 / 16.0, j as f64 * std::f64::consts::PI / 16.0);
                m = m.min(model.lambda(p));
            }
        }
        0.9 * m
    };
    let mut best = (f64::INFINITY, (0, 0));
    for i in 0..bl.len() {
        for j in i + 1..bl.len() {
            for a in &bl[i] {
                for b in &bl[j] {
                    let gx = (a.lo[0] - b.hi[0]).max(b.lo[0] - a.hi[0]).max(0.0);
                    let gy = (a.lo[1] - b.hi[1]).max(b.lo[1] - a.hi[1]).max(0.0);
                    if lam_min * gx.hypot(gy) >= best.0 {
                        continue;
                    }
                    for p in a.pts.windows(2) {
                        for q in b.pts.windows(2) {
                            let (e, mid) = segment_segment(&p[0], &p[1], &q[0], &q[1]);
                            if lam_min * e >= best.0 {
                                continue;
                            }
                            let d = model.lambda(mid) * e;
                            if d < best.0 {
                                best = (d, (i, j));
                            }
                        }
                    }
                }
            }
        }
    }
    LeafSeparation {
        min_distance: best.0,
        closest_pair: best.1,
        resolution: ext.resolution,
        chord_error: ext.chord_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn foot_on_diameter_by_symmetry() {
        let m = HadamardModel::poincare();
        let alpha = GeodesicPath::trace(&m, Point2::ORIGIN, 0.0, -10.0, 10.0, 0.05).unwrap();
        let f = foot_of_perpendicular(&alpha, Point2::new(0.0, 0.5)).unwrap();
        assert!(f.point.norm() < 1e-9);
        assert!((f.distance - 2.0 * 0.5f64.atanh()).abs() < 1e-9);
        assert!(f.orthogonality < 1e-9);
    }

    #[test]
    fn orthogonal_leaf_at_zero_is_vertical_diameter() {
        let m = HadamardModel::poincare();
        let alpha = GeodesicPath::trace(&m, Point2::ORIGIN, 0.0, -10.0, 10.0, 0.05).unwrap();
        let leaves = foliation_orthogonal(&alpha, &[-1.0, 0.0, 1.0], 8.0, 0.01).unwrap();
        for q in leaves[1].samples() {
            assert!(q.point.x.abs() < 1e-12);
        }
        let pts: Vec<Vec<Point2>> = leaves.iter().map(|l| l.chart_polyline()).collect();
        let sep = leaf_separation(&m, &pts, 0.9);
        assert!(sep.disjoint(), "{sep:?}");
    }

    #[test]
    fn leaves_from_infinity_through_pi() {
        let m = HadamardModel::poincare();
        let leaves = foliation_from_infinity(&m, IdealPoint::new(PI), &[IdealPoint::new(0.0)]).unwrap();
        for q in leaves[0].path.samples() {
            assert!(q.point.y.abs() < 1e-9);
        }
    }
}
