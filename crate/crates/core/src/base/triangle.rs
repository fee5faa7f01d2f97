use std::f64::consts::PI;

use serde::Serialize;

use super::geodesic::shoot;
use super::model::{wrap_pi, HadamardModel, Point2};
use crate::error::Result;

/// Side lengths, angles, and slacks of the three comparison inequalities.
///
/// `a`, `b`, `c` are opposite the vertices `p`, `q`, `r` at which the angles
/// `alpha`, `beta`, `gamma` sit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `c² − (a² + b² − 2ab cos γ)`
    pub cosine_slack: f64,
    /// `b cos α + a cos β − c`
    pub double_slack: f64,
    /// `π − (α + β + γ)`
    pub angle_sum_slack: f64,
}

impl TriangleReport {
    pub fn min_slack(&self) -> f64 {
        self.cosine_slack.min(self.double_slack).min(self.angle_sum_slack)
    }
}

/// Geodesic triangle `pqr` measured with three shootings.
pub fn triangle_checks(model: &HadamardModel, p: Point2, q: Point2, r: Point2) -> Result<TriangleReport> {
    let pq = shoot(model, p, q, 200)?;
    let pr = shoot(model, p, r, 200)?;
    let qr = shoot(model, q, r, 200)?;
    let (a, b, c) = (qr.length, pr.length, pq.length);
    let angle = |u: f64, v: f64| wrap_pi(u - v).abs();
    let alpha = angle(pq.psi_start, pr.psi_start);
    let beta = angle(pq.psi_end + PI, qr.psi_start);
    let gamma = angle(pr.psi_end + PI, qr.psi_end + PI);
    Ok(TriangleReport {
        a,
        b,
        c,
        alpha,
        beta,
        gamma,
        cosine_slack: c * c - (a * a + b * b - 2.0 * a * b * gamma.cos()),
        double_slack: b * alpha.cos() + a * beta.cos() - c,
        angle_sum_slack: PI - (alpha + beta + gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_triangle_at_origin() {
        let m = HadamardModel::poincare();
        let t = triangle_checks(&m, Point2::ORIGIN, Point2::new(0.5, 0.0), Point2::new(0.0, 0.5)).unwrap();
        // hyperbolic right triangle with legs arccosh(5/3): cosh c = cosh² b
        let leg = (5.0f64 / 3.0).acosh();
        assert!((t.b - leg).abs() < 1e-9 && (t.c - leg).abs() < 1e-9);
        assert!((t.a.cosh() - leg.cosh().powi(2)).abs() < 1e-8);
        assert!((t.alpha - PI / 2.0).abs() < 1e-9);
        // remaining angles from tan β = tanh b / sinh c
        let beta = (leg.tanh() / leg.sinh()).atan();
        assert!((t.beta - beta).abs() < 1e-8 && (t.gamma - beta).abs() < 1e-8);
        assert!(t.angle_sum_slack > 0.1);
    }

    #[test]
    fn tiny_triangle_is_euclidean() {
        let m = HadamardModel::poincare();
        let t = triangle_checks(
            &m,
            Point2::new(0.2, 0.1),
            Point2::new(0.2003, 0.1),
            Point2::new(0.2, 0.1004),
        )
        .unwrap();
        assert!(t.min_slack() > -1e-9);
        assert!(t.cosine_slack.abs() < 1e-8 && t.angle_sum_slack.abs() < 1e-6);
    }
}
