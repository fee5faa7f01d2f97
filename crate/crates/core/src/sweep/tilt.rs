use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use super::convexity::convexity_check;
use super::plane::IntersectionCurve;
use crate::base::wrap_2pi;
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Tilt {
    Tilted,
    /// Some fiber ray stays in the convex body; `direction` is `+1` for
    /// the flow forward in `t`, `-1` for backward.
    Untilted { direction: f64 },
    NotApplicable,
}

fn point_at(q: &[[f64; 2]], arc: &[f64], s: f64) -> [f64; 2] {
    let i = arc.partition_point(|a| *a < s).clamp(1, q.len() - 1);
    let l = ((s - arc[i - 1]) / (arc[i] - arc[i - 1]).max(1e-300)).clamp(0.0, 1.0);
    [q[i - 1][0] + l * (q[i][0] - q[i - 1][0]), q[i - 1][1] + l * (q[i][1] - q[i - 1][1])]
}

fn angle(v: [f64; 2]) -> f64 {
    wrap_2pi(v[1].atan2(v[0]))
}

/// Tilt of the arc `[s0, s1]` of an open convex curve: the convex body
/// recedes in the cone spanned by the end directions, and a fiber ray stays
/// inside iff `±z` is strictly inside that cone.
fn classify(q: &[[f64; 2]], arc: &[f64], s0: f64, s1: f64) -> Tilt {
    let l = s1 - s0;
    let (a, b) = (point_at(q, arc, s0), point_at(q, arc, s1));
    let (a_in, b_in) = (point_at(q, arc, s0 + 0.15 * l), point_at(q, arc, s1 - 0.15 * l));
    let mid = point_at(q, arc, s0 + 0.5 * l);
    let e1 = angle([a[0] - a_in[0], a[1] - a_in[1]]);
    let e2 = angle([b[0] - b_in[0], b[1] - b_in[1]]);
    let body = angle([0.5 * (a[0] + b[0]) - mid[0], 0.5 * (a[1] + b[1]) - mid[1]]);
    let w = wrap_2pi(e2 - e1);
    let (lo, width) = if wrap_2pi(body - e1) < w { (e1, w) } else { (e2, TAU - w) };
    let inside = |t: f64| {
        let d = wrap_2pi(t - lo);
        d > 1e-9 && d < width - 1e-9
    };
    if inside(FRAC_PI_2) {
        Tilt::Untilted { direction: 1.0 }
    } else if inside(3.0 * FRAC_PI_2) {
        Tilt::Untilted { direction: -1.0 }
    } else {
        Tilt::Tilted
    }
}

/// Whether a complete convex section is tilted in its plane. Curves that are
/// closed, do not leave the window at both ends, or are not strictly convex
/// are `NotApplicable`.
pub fn tilt_classify(curve: &IntersectionCurve, margin: f64) -> Result<Tilt> {
    if curve.closed || !curve.touches_window || curve.len() < 8 || !convexity_check(curve, margin).passes {
        return Ok(Tilt::NotApplicable);
    }
    let q = &curve.plane_coords;
    let l = *curve.arc.last().unwrap();
    let full = classify(q, &curve.arc, 0.0, l);
    let half = classify(q, &curve.arc, 0.25 * l, 0.75 * l);
    if full != half {
        return Err(GeomError::WindowTooSmall);
    }
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola(rot: f64) -> IntersectionCurve {
        let (s, c) = rot.sin_cos();
        let q = (0..401)
            .map(|k| {
                let x = -4.0 + 0.02 * k as f64;
                let y = x * x;
                [c * x - s * y, s * x + c * y]
            })
            .collect();
        IntersectionCurve::from_plane_polyline(q, false, true)
    }

    #[test]
    fn upright_and_rotated_parabolas() {
        assert_eq!(tilt_classify(&parabola(0.0), 1e-4).unwrap(), Tilt::Untilted { direction: 1.0 });
        assert_eq!(tilt_classify(&parabola(std::f64::consts::PI), 1e-4).unwrap(), Tilt::Untilted { direction: -1.0 });
        assert_eq!(tilt_classify(&parabola(std::f64::consts::FRAC_PI_4), 1e-4).unwrap(), Tilt::Tilted);
        assert_eq!(tilt_classify(&parabola(-FRAC_PI_2), 1e-4).unwrap(), Tilt::Tilted);
    }
}
