use serde::Serialize;

use super::plane::IntersectionCurve;

/// Sign and size of a section's curvature in its plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub passes: bool,
    /// `+1` for left turns, `-1` for right turns, 0 when mixed.
    pub sign: f64,
    pub min_abs_curvature: f64,
    pub max_abs_curvature: f64,
    /// Total signed turning of the tangent.
    pub turning: f64,
    /// Arc-length positions where the curvature changes sign.
    pub sign_changes: Vec<f64>,
    pub vertices: usize,
    pub margin: f64,
}

/// Strict convexity of a section in flat plane coordinates: the curvature
/// keeps one sign and stays above `margin` in absolute value.
pub fn convexity_check(curve: &IntersectionCurve, margin: f64) -> ConvexityReport {
    let k: Vec<(f64, f64)> = curve
        .curvature
        .iter()
        .zip(&curve.arc)
        .filter(|(k, _)| k.is_finite())
        .map(|(k, s)| (*k, *s))
        .collect();
    let pos = k.iter().filter(|v| v.0 > 0.0).count();
    let neg = k.iter().filter(|v| v.0 < 0.0).count();
    let sign = match (pos, neg) {
        (p, 0) if p > 0 => 1.0,
        (0, n) if n > 0 => -1.0,
        _ => 0.0,
    };
    let mut sign_changes = Vec::new();
    for w in k.windows(2) {
        if (w[0].0 > 0.0) != (w[1].0 > 0.0) {
            let l = w[0].0 / (w[0].0 - w[1].0);
            sign_changes.push(w[0].1 + l * (w[1].1 - w[0].1));
        }
    }
    let min_abs = k.iter().map(|v| v.0.abs()).fold(f64::INFINITY, f64::min);
    let max_abs = k.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
    let q = &curve.plane_coords;
    let n = q.len();
    let mut turning = 0.0;
    let segs = if curve.closed { n } else { n.saturating_sub(1) };
    let dir = |i: usize| {
        let (a, b) = (q[i % n], q[(i + 1) % n]);
        (b[1] - a[1]).atan2(b[0] - a[0])
    };
    for i in 1..segs {
        turning += crate::base::wrap_pi(dir(i) - dir(i - 1));
    }
    if curve.closed && n > 2 {
        turning += crate::base::wrap_pi(dir(0) - dir(n - 1));
    }
    ConvexityReport {
        passes: sign != 0.0 && min_abs > margin,
        sign,
        min_abs_curvature: if k.is_empty() { 0.0 } else { min_abs },
        max_abs_curvature: max_abs,
        turning,
        sign_changes,
        vertices: n,
        margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_line() {
        let c: Vec<[f64; 2]> = (0..100)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 100.0;
                [2.0 * a.cos(), 2.0 * a.sin()]
            })
            .collect();
        let r = convexity_check(&IntersectionCurve::from_plane_polyline(c, true, false), 1e-4);
        assert!(r.passes);
        assert!((r.min_abs_curvature - 0.5).abs() < 1e-3);
        assert!((r.turning - std::f64::consts::TAU).abs() < 1e-9);
        let line: Vec<[f64; 2]> = (0..50).map(|k| [0.0, k as f64 * 0.1]).collect();
        let r = convexity_check(&IntersectionCurve::from_plane_polyline(line, false, true), 1e-4);
        assert!(!r.passes);
    }

    #[test]
    fn cubic_inflection_is_located() {
        let c: Vec<[f64; 2]> = (0..201).map(|k| {
            let x = -1.0 + k as f64 * 0.01 + 0.3;
            [x, (x - 0.3).powi(3)]
        }).collect();
        let r = convexity_check(&IntersectionCurve::from_plane_polyline(c.clone(), false, true), 1e-4);
        assert!(!r.passes);
        assert_eq!(r.sign_changes.len(), 1);
        let curve = IntersectionCurve::from_plane_polyline(c, false, true);
        let at = curve.arc.partition_point(|s| *s < r.sign_changes[0]);
        assert!((curve.plane_coords[at][0] - 0.3).abs() < 0.02);
    }
}
