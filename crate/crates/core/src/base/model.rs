use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::expr::ScalarExpr;

/// Chart coordinates of a point of the base surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, o: &Point2) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// A tangent vector with its base point; components are chart components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangent2 {
    pub at: Point2,
    pub u: f64,
    pub v: f64,
}

impl Tangent2 {
    pub fn new(at: Point2, u: f64, v: f64) -> Self {
        Self { at, u, v }
    }

    /// Chart direction angle of the vector.
    pub fn chart_angle(&self) -> f64 {
        self.v.atan2(self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartDomain {
    UnitDisk,
    Plane,
}

impl ChartDomain {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            ChartDomain::UnitDisk => p.x * p.x + p.y * p.y < 1.0,
            ChartDomain::Plane => p.x.is_finite() && p.y.is_finite(),
        }
    }
}

/// A conformal factor supplied as an expression in `x`, `y`.
#[derive(Debug, Clone)]
pub struct UserConformal {
    pub lambda: ScalarExpr,
    pub domain: ChartDomain,
    pub declared_bound: f64,
    pub complete: bool,
}

impl UserConformal {
    fn phi(&self, x: f64, y: f64) -> f64 {
        self.lambda.eval(&[x, y]).ln()
    }

    fn grad_phi(&self, p: Point2) -> [f64; 2] {
        let d = |h: f64| {
            [
                (self.phi(p.x + h, p.y) - self.phi(p.x - h, p.y)) / (2.0 * h),
                (self.phi(p.x, p.y + h) - self.phi(p.x, p.y - h)) / (2.0 * h),
            ]
        };
        let (a, b) = (d(2e-5), d(1e-5));
        [(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0]
    }

    fn laplacian_phi(&self, p: Point2) -> f64 {
        let lap = |h: f64| {
            let c = self.phi(p.x, p.y);
            (self.phi(p.x + h, p.y) + self.phi(p.x - h, p.y) + self.phi(p.x, p.y + h)
                + self.phi(p.x, p.y - h)
                - 4.0 * c)
                / (h * h)
        };
        (4.0 * lap(1e-3) - lap(2e-3)) / 3.0
    }
}

#[derive(Clone)]
pub enum ModelKind {
    /// Poincaré disk rescaled to curvature `-a²`.
    Poincare { a: f64 },
    /// Poincaré disk with factor `e^{eps x}`; curvature `-a² e^{-2 eps x}`.
    WarpedDisk { a: f64, eps: f64 },
    /// Euclidean plane. Not Hadamard in the strict sense; kept for tests.
    Flat,
    Conformal(Arc<UserConformal>),
}

/// A conformal metric `λ²(dx² + dy²)` on a chart domain.
#[derive(Clone)]
pub struct HadamardModel {
    kind: ModelKind,
}

impl fmt::Debug for HadamardModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HadamardModel({})", self.describe())
    }
}

impl HadamardModel {
    pub fn poincare() -> Self {
        Self::scaled_poincare(1.0)
    }

    pub fn scaled_poincare(a: f64) -> Self {
        assert!(a > 0.0, "curvature scale must be positive");
        Self {
            kind: ModelKind::Poincare { a },
        }
    }

    pub fn warped_disk(a: f64, eps: f64) -> Self {
        assert!(a > 0.0, "curvature scale must be positive");
        Self {
            kind: ModelKind::WarpedDisk { a, eps },
        }
    }

    pub fn flat() -> Self {
        Self {
            kind: ModelKind::Flat,
        }
    }

    /// A user model; its curvature bound is checked on a grid before use.
    pub fn user(lambda: &str, domain: ChartDomain, declared_bound: f64, complete: bool) -> Result<Self> {
        let lambda = ScalarExpr::parse(lambda, &["x", "y"])?;
        let model = Self {
            kind: ModelKind::Conformal(Arc::new(UserConformal {
                lambda,
                domain,
                declared_bound,
                complete,
            })),
        };
        model.check_strictness(24)?;
        Ok(model)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ModelKind::Poincare { a } => format!("poincare(a={a})"),
            ModelKind::WarpedDisk { a, eps } => format!("warped_disk(a={a}, eps={eps})"),
            ModelKind::Flat => "flat".into(),
            ModelKind::Conformal(u) => format!("conformal({})", u.lambda.source()),
        }
    }

    pub fn domain(&self) -> ChartDomain {
        match &self.kind {
            ModelKind::Poincare { .. } | ModelKind::WarpedDisk { .. } => ChartDomain::UnitDisk,
            ModelKind::Flat => ChartDomain::Plane,
            ModelKind::Conformal(u) => u.domain,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.domain().contains(p)
    }

    /// Whether geodesics can be continued up to the chart boundary.
    pub fn is_complete(&self) -> bool {
        match &self.kind {
            ModelKind::Conformal(u) => u.complete,
            _ => true,
        }
    }

    /// True when geodesics through the origin are chart rays.
    pub fn is_radial(&self) -> bool {
        matches!(self.kind, ModelKind::Poincare { .. } | ModelKind::Flat)
    }

    /// Basepoint used to parametrize the ideal boundary.
    pub fn basepoint(&self) -> Point2 {
        Point2::ORIGIN
    }

    /// The constant `c < 0` with `κ ≤ c`, if the model is strictly negatively curved.
    pub fn curvature_bound(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::Poincare { a } => Some(-a * a),
            ModelKind::WarpedDisk { a, eps } => Some(-a * a * (-2.0 * eps.abs()).exp()),
            ModelKind::Flat => None,
            ModelKind::Conformal(u) => Some(u.declared_bound),
        }
    }

    pub fn lambda(&self, p: Point2) -> f64 {
        match &self.kind {
            ModelKind::Poincare { a } => 2.0 / (a * (1.0 - p.x * p.x - p.y * p.y)),
            ModelKind::WarpedDisk { a, eps } => {
                2.0 * (eps * p.x).exp() / (a * (1.0 - p.x * p.x - p.y * p.y))
            }
            ModelKind::Flat => 1.0,
            ModelKind::Conformal(u) => u.lambda.eval(&[p.x, p.y]),
        }
    }

    /// `1/λ`, which the built-in disks keep finite (zero) on the boundary circle.
    pub fn inv_lambda(&self, p: Point2) -> f64 {
        match &self.kind {
            ModelKind::Poincare { a } => (0.5 * a * (1.0 - p.x * p.x - p.y * p.y)).max(0.0),
            ModelKind::WarpedDisk { a, eps } => {
                (0.5 * a * (1.0 - p.x * p.x - p.y * p.y) * (-eps * p.x).exp()).max(0.0)
            }
            _ => 1.0 / self.lambda(p),
        }
    }

    /// Gradient of `φ = log λ`.
    pub fn grad_phi(&self, p: Point2) -> [f64; 2] {
        match &self.kind {
            ModelKind::Poincare { .. } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                [2.0 * p.x / d, 2.0 * p.y / d]
            }
            ModelKind::WarpedDisk { eps, .. } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                [2.0 * p.x / d + eps, 2.0 * p.y / d]
            }
            ModelKind::Flat => [0.0, 0.0],
            ModelKind::Conformal(u) => u.grad_phi(p),
        }
    }

    /// `∇φ / λ`, finite up to the boundary for the built-in disks.
    pub fn grad_phi_scaled(&self, p: Point2) -> [f64; 2] {
        match &self.kind {
            ModelKind::Poincare { a } => [a * p.x, a * p.y],
            ModelKind::WarpedDisk { a, eps } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                let f = a * (-eps * p.x).exp();
                [f * (p.x + 0.5 * eps * d), f * p.y]
            }
            _ => {
                let g = self.grad_phi(p);
                let il = self.inv_lambda(p);
                [g[0] * il, g[1] * il]
            }
        }
    }

    /// Second derivatives `[φxx, φxy, φyy]`.
    pub fn hess_phi(&self, p: Point2) -> [f64; 3] {
        match &self.kind {
            ModelKind::Poincare { .. } | ModelKind::WarpedDisk { .. } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                let d2 = d * d;
                [
                    2.0 / d + 4.0 * p.x * p.x / d2,
                    4.0 * p.x * p.y / d2,
                    2.0 / d + 4.0 * p.y * p.y / d2,
                ]
            }
            ModelKind::Flat => [0.0; 3],
            ModelKind::Conformal(_) => {
                let h = 1e-5;
                let gx1 = self.grad_phi(Point2::new(p.x + h, p.y));
                let gx0 = self.grad_phi(Point2::new(p.x - h, p.y));
                let gy1 = self.grad_phi(Point2::new(p.x, p.y + h));
                let gy0 = self.grad_phi(Point2::new(p.x, p.y - h));
                [
                    (gx1[0] - gx0[0]) / (2.0 * h),
                    0.5 * ((gx1[1] - gx0[1]) + (gy1[0] - gy0[0])) / (2.0 * h),
                    (gy1[1] - gy0[1]) / (2.0 * h),
                ]
            }
        }
    }

    /// Gauss curvature `-Δφ / λ²`.
    pub fn kappa(&self, p: Point2) -> f64 {
        match &self.kind {
            ModelKind::Poincare { a } => -a * a,
            ModelKind::WarpedDisk { a, eps } => -a * a * (-2.0 * eps * p.x).exp(),
            ModelKind::Flat => 0.0,
            ModelKind::Conformal(u) => {
                let l = self.lambda(p);
                -u.laplacian_phi(p) / (l * l)
            }
        }
    }

    /// Checks `κ ≤ c < 0` on an `n × n` polar (disk) or square (plane) grid.
    /// Returns the largest sampled curvature.
    pub fn check_strictness(&self, n: usize) -> Result<f64> {
        let c = self
            .curvature_bound()
            .ok_or_else(|| GeomError::InvalidInput(format!("{} has no negative curvature bound", self.describe())))?;
        if c >= 0.0 {
            return Err(GeomError::InvalidInput(format!("declared bound {c} is not negative")));
        }
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                let p = match self.domain() {
                    ChartDomain::UnitDisk => Point2::polar(
                        0.95 * (i as f64 + 0.5) / n as f64,
                        2.0 * PI * j as f64 / n as f64,
                    ),
                    ChartDomain::Plane => Point2::new(
                        -5.0 + 10.0 * (i as f64 + 0.5) / n as f64,
                        -5.0 + 10.0 * (j as f64 + 0.5) / n as f64,
                    ),
                };
                let l = self.lambda(p);
                if !(l.is_finite() && l > 0.0) {
                    return Err(GeomError::InvalidInput(format!(
                        "conformal factor {l} is not positive at ({}, {})",
                        p.x, p.y
                    )));
                }
                let k = self.kappa(p);
                worst = worst.max(k);
                if k > c + 1e-6 * c.abs() {
                    return Err(GeomError::InvalidInput(format!(
                        "curvature {k} exceeds the declared bound {c} at ({}, {})",
                        p.x, p.y
                    )));
                }
            }
        }
        Ok(worst)
    }

    /// Christoffel symbols `Γ[k][i][j]` of the conformal metric.
    pub fn christoffel(&self, p: Point2) -> [[[f64; 2]; 2]; 2] {
        let [px, py] = self.grad_phi(p);
        [[[px, py], [py, -px]], [[-py, px], [px, py]]]
    }

    pub fn inner(&self, a: &Tangent2, b: &Tangent2) -> f64 {
        let l = self.lambda(a.at);
        l * l * (a.u * b.u + a.v * b.v)
    }

    pub fn norm(&self, t: &Tangent2) -> f64 {
        self.lambda(t.at) * t.u.hypot(t.v)
    }

    /// The unit tangent at `p` whose chart direction is `psi`.
    pub fn unit_tangent(&self, p: Point2, psi: f64) -> Tangent2 {
        let il = self.inv_lambda(p);
        Tangent2::new(p, il * psi.cos(), il * psi.sin())
    }

    /// Metric length of the chart segment `p → q` (Gauss–Legendre).
    pub fn chord_length(&self, p: Point2, q: Point2) -> f64 {
        let e = p.dist(&q);
        let nodes = crate::quad::gauss_legendre_16();
        nodes
            .iter()
            .map(|(t, w)| {
                let s = 0.5 * (t + 1.0);
                w * 0.5 * self.lambda(Point2::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)))
            })
            .sum::<f64>()
            * e
    }
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Wraps an angle to `[0, 2π)`.
pub fn wrap_2pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poincare_curvature_from_laplacian() {
        let m = HadamardModel::user("2/(1-x^2-y^2)", ChartDomain::UnitDisk, -0.99, true).unwrap();
        for p in [Point2::new(0.1, 0.2), Point2::new(-0.5, 0.3), Point2::new(0.0, 0.8)] {
            assert!((m.kappa(p) + 1.0).abs() < 1e-5, "{}", m.kappa(p));
        }
    }

    #[test]
    fn warped_disk_matches_user_expression() {
        let w = HadamardModel::warped_disk(1.5, 0.4);
        let u = HadamardModel::user(
            "2*exp(0.4*x)/(1.5*(1-x^2-y^2))",
            ChartDomain::UnitDisk,
            -1.5 * 1.5 * (-0.8f64).exp(),
            true,
        )
        .unwrap();
        for p in [Point2::new(0.3, -0.2), Point2::new(-0.7, 0.1)] {
            assert!((w.kappa(p) - u.kappa(p)).abs() < 1e-5);
            let (a, b) = (w.grad_phi(p), u.grad_phi(p));
            assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8);
            let (a, b) = (w.hess_phi(p), u.hess_phi(p));
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-5);
            }
            let s = w.grad_phi_scaled(p);
            let il = 1.0 / w.lambda(p);
            assert!((s[0] - a_grad(&w, p)[0] * il).abs() < 1e-12 && (s[1] - a_grad(&w, p)[1] * il).abs() < 1e-12);
        }
    }

    fn a_grad(m: &HadamardModel, p: Point2) -> [f64; 2] {
        m.grad_phi(p)
    }

    #[test]
    fn positive_curvature_rejected() {
        // the round sphere's stereographic factor
        let r = HadamardModel::user("2/(1+x^2+y^2)", ChartDomain::Plane, -0.5, true);
        assert!(r.is_err());
    }

    #[test]
    fn chord_length_of_radius() {
        let m = HadamardModel::poincare();
        let d = m.chord_length(Point2::ORIGIN, Point2::new(0.5, 0.0));
        assert!((d - 2.0 * 0.5f64.atanh()).abs() < 1e-12);
    }

    #[test]
    fn wrapping() {
        assert!((wrap_pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_2pi(-0.5) - (2.0 * PI - 0.5)).abs() < 1e-12);
    }
}
