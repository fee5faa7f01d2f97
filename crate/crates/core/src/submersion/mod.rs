//! Killing submersions in a global chart `(x, y, t)` with metric
//! `π*g + (dt + ω)²`, where `ξ = ∂_t` is the unit Killing field.

mod curvature;
mod geodesic3;

pub use curvature::{CurvatureSample, TauFit};
pub use geodesic3::Shot3;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::base::{HadamardModel, ModelKind, Point2};
use crate::error::{GeomError, Result};
use crate::expr::ScalarExpr;

pub type Vec3 = Vector3<f64>;

/// Chart coordinates of a point of the total space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn base(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn offset(&self, v: &Vec3, h: f64) -> Point3 {
        Point3::new(self.x + h * v[0], self.y + h * v[1], self.t + h * v[2])
    }

    pub fn coords(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.t)
    }
}

/// A tangent vector with chart components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent3 {
    pub at: Point3,
    pub v: Vec3,
}

impl Tangent3 {
    pub fn new(at: Point3, v: Vec3) -> Self {
        Self { at, v }
    }
}

/// Positively oriented orthonormal frame `(X, Y, ξ)` with `X, Y` horizontal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame3 {
    pub at: Point3,
    pub x: Vec3,
    pub y: Vec3,
    pub xi: Vec3,
}

#[derive(Debug, Clone)]
pub enum ConnectionForm {
    Zero,
    /// `c (y dx − x dy) / (1 − x² − y²)` on the unit disk.
    Rotational { c: f64 },
    User { wx: ScalarExpr, wy: ScalarExpr },
}

/// A Killing submersion over a Hadamard model.
#[derive(Debug, Clone)]
pub struct SubmersionModel {
    base: HadamardModel,
    omega: ConnectionForm,
    analytic_tau: Option<AnalyticTau>,
}

#[derive(Debug, Clone)]
pub enum AnalyticTau {
    Constant(f64),
    /// `tau0 · e^{-2 eps x}`, the bundle curvature of the rotational form over a warped disk.
    Warped { tau0: f64, eps: f64 },
    Expr(ScalarExpr),
}

impl AnalyticTau {
    pub fn eval(&self, p: Point2) -> f64 {
        match self {
            AnalyticTau::Constant(t) => *t,
            AnalyticTau::Warped { tau0, eps } => tau0 * (-2.0 * eps * p.x).exp(),
            AnalyticTau::Expr(e) => e.eval(&[p.x, p.y]),
        }
    }
}

fn fd_partials<F: Fn(f64, f64) -> f64>(f: F, p: Point2) -> [f64; 2] {
    let d = |h: f64| {
        [
            (f(p.x + h, p.y) - f(p.x - h, p.y)) / (2.0 * h),
            (f(p.x, p.y + h) - f(p.x, p.y - h)) / (2.0 * h),
        ]
    };
    let (a, b) = (d(2e-5), d(1e-5));
    [(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0]
}

impl SubmersionModel {
    /// `M² × R`.
    pub fn product(base: HadamardModel) -> Self {
        Self {
            base,
            omega: ConnectionForm::Zero,
            analytic_tau: Some(AnalyticTau::Constant(0.0)),
        }
    }

    /// The rotational bundle with bundle curvature `tau0` over `H²(−a²)`.
    pub fn e_kappa_tau(a: f64, tau0: f64) -> Self {
        Self {
            base: HadamardModel::scaled_poincare(a),
            omega: ConnectionForm::Rotational { c: 4.0 * tau0 / (a * a) },
            analytic_tau: Some(AnalyticTau::Constant(tau0)),
        }
    }

    /// The same rotational form over a warped disk; `τ` is no longer constant.
    pub fn warped_bundle(a: f64, eps: f64, tau0: f64) -> Self {
        Self {
            base: HadamardModel::warped_disk(a, eps),
            omega: ConnectionForm::Rotational { c: 4.0 * tau0 / (a * a) },
            analytic_tau: Some(AnalyticTau::Warped { tau0, eps }),
        }
    }

    pub fn with_form(base: HadamardModel, omega: ConnectionForm, analytic_tau: Option<AnalyticTau>) -> Result<Self> {
        if matches!(omega, ConnectionForm::Rotational { .. }) && base.domain() != crate::base::ChartDomain::UnitDisk {
            return Err(GeomError::InvalidInput("the rotational form lives on the unit disk".into()));
        }
        Ok(Self {
            base,
            omega,
            analytic_tau,
        })
    }

    /// A copy with `ω` negated but the declared `τ` kept; no longer consistent.
    pub fn with_flipped_form(&self) -> Self {
        let omega = match &self.omega {
            ConnectionForm::Zero => ConnectionForm::Zero,
            ConnectionForm::Rotational { c } => ConnectionForm::Rotational { c: -c },
            ConnectionForm::User { wx, wy } => ConnectionForm::User {
                wx: ScalarExpr::parse(&format!("-({})", wx.source()), &["x", "y"]).unwrap(),
                wy: ScalarExpr::parse(&format!("-({})", wy.source()), &["x", "y"]).unwrap(),
            },
        };
        Self {
            omega,
            ..self.clone()
        }
    }

    pub fn base(&self) -> &HadamardModel {
        &self.base
    }

    pub fn omega(&self) -> &ConnectionForm {
        &self.omega
    }

    pub fn analytic_tau(&self, p: Point2) -> Option<f64> {
        self.analytic_tau.as_ref().map(|t| t.eval(p))
    }

    pub fn describe(&self) -> String {
        let w = match &self.omega {
            ConnectionForm::Zero => "0".to_string(),
            ConnectionForm::Rotational { c } => format!("rotational(c={c})"),
            ConnectionForm::User { wx, wy } => format!("({})dx + ({})dy", wx.source(), wy.source()),
        };
        format!("{} with omega = {w}", self.base.describe())
    }

    pub fn contains(&self, p: Point3) -> bool {
        self.base.contains(p.base()) && p.t.is_finite()
    }

    fn check(&self, p: Point3) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(GeomError::ChartExit { x: p.x, y: p.y })
        }
    }

    /// Coefficients `(a, b)` of `ω = a dx + b dy`.
    pub fn form(&self, p: Point2) -> [f64; 2] {
        match &self.omega {
            ConnectionForm::Zero => [0.0, 0.0],
            ConnectionForm::Rotational { c } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                [c * p.y / d, -c * p.x / d]
            }
            ConnectionForm::User { wx, wy } => [wx.eval(&[p.x, p.y]), wy.eval(&[p.x, p.y])],
        }
    }

    /// `[[∂x a, ∂y a], [∂x b, ∂y b]]` for `ω = a dx + b dy`.
    pub fn form_jacobian(&self, p: Point2) -> [[f64; 2]; 2] {
        match &self.omega {
            ConnectionForm::Zero => [[0.0; 2]; 2],
            ConnectionForm::Rotational { c } => {
                let d = 1.0 - p.x * p.x - p.y * p.y;
                let d2 = d * d;
                [
                    [2.0 * c * p.x * p.y / d2, c * (d + 2.0 * p.y * p.y) / d2],
                    [-c * (d + 2.0 * p.x * p.x) / d2, -2.0 * c * p.x * p.y / d2],
                ]
            }
            ConnectionForm::User { wx, wy } => [
                fd_partials(|x, y| wx.eval(&[x, y]), p),
                fd_partials(|x, y| wy.eval(&[x, y]), p),
            ],
        }
    }

    /// Metric matrix at `p`.
    pub fn metric(&self, p: Point3) -> Matrix3<f64> {
        let b = p.base();
        let l = self.base.lambda(b);
        let l2 = l * l;
        let [a, c] = self.form(b);
        Matrix3::new(l2 + a * a, a * c, a, a * c, l2 + c * c, c, a, c, 1.0)
    }

    /// Inverse metric, in closed form.
    pub fn metric_inv(&self, p: Point3) -> Matrix3<f64> {
        let b = p.base();
        let il = self.base.inv_lambda(b);
        let il2 = il * il;
        let [a, c] = self.form(b);
        Matrix3::new(
            il2,
            0.0,
            -a * il2,
            0.0,
            il2,
            -c * il2,
            -a * il2,
            -c * il2,
            1.0 + (a * a + c * c) * il2,
        )
    }

    /// `√det g`, which equals `λ²`.
    pub fn volume_factor(&self, p: Point3) -> f64 {
        let l = self.base.lambda(p.base());
        l * l
    }

    /// Partial derivatives of the metric in `x`, `y`, `t` (analytic for built-ins).
    pub fn metric_partials(&self, p: Point3) -> [Matrix3<f64>; 3] {
        if matches!(self.omega, ConnectionForm::User { .. }) || matches!(self.base.kind(), ModelKind::Conformal(_)) {
            return self.metric_partials_fd(p);
        }
        let b = p.base();
        let l = self.base.lambda(b);
        let l2 = l * l;
        let gp = self.base.grad_phi(b);
        let [a, c] = self.form(b);
        let j = self.form_jacobian(b);
        let mut out = [Matrix3::zeros(); 3];
        for i in 0..2 {
            let dl2 = 2.0 * l2 * gp[i];
            let (da, dc) = (j[0][i], j[1][i]);
            out[i] = Matrix3::new(
                dl2 + 2.0 * a * da,
                da * c + a * dc,
                da,
                da * c + a * dc,
                dl2 + 2.0 * c * dc,
                dc,
                da,
                dc,
                0.0,
            );
        }
        out
    }

    /// Central differences of the metric components, step `1e-5`, one Richardson pass.
    pub fn metric_partials_fd(&self, p: Point3) -> [Matrix3<f64>; 3] {
        let mut out = [Matrix3::zeros(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut e = Vec3::zeros();
            e[i] = 1.0;
            let d = |h: f64| (self.metric(p.offset(&e, h)) - self.metric(p.offset(&e, -h))) / (2.0 * h);
            *o = (4.0 * d(1e-5) - d(2e-5)) / 3.0;
        }
        out
    }

    fn christoffel_from(&self, p: Point3, dg: &[Matrix3<f64>; 3]) -> Christoffel {
        let gi = self.metric_inv(p);
        let mut g = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                // lowered symbol Γ_{l,ij}
                let low: [f64; 3] =
                    std::array::from_fn(|l| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]));
                for k in 0..3 {
                    let v = (0..3).map(|l| gi[(k, l)] * low[l]).sum::<f64>();
                    g[k][i][j] = v;
                    g[k][j][i] = v;
                }
            }
        }
        Christoffel(g)
    }

    /// Levi-Civita connection coefficients `Γ^k_ij`.
    pub fn christoffel3(&self, p: Point3) -> Result<Christoffel> {
        self.check(p)?;
        Ok(self.christoffel_from(p, &self.metric_partials(p)))
    }

    /// Same as [`Self::christoffel3`], always from finite differences of the metric.
    pub fn christoffel3_fd(&self, p: Point3) -> Result<Christoffel> {
        self.check(p)?;
        Ok(self.christoffel_from(p, &self.metric_partials_fd(p)))
    }

    pub fn inner(&self, p: Point3, u: &Vec3, v: &Vec3) -> f64 {
        (u.transpose() * self.metric(p) * v)[(0, 0)]
    }

    pub fn norm(&self, p: Point3, u: &Vec3) -> f64 {
        self.inner(p, u, u).max(0.0).sqrt()
    }

    pub fn xi(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, 1.0)
    }

    /// Horizontal lift of the base vector `e` at `p`.
    pub fn lift(&self, p: Point3, e: [f64; 2]) -> Vec3 {
        let [a, c] = self.form(p.base());
        Vec3::new(e[0], e[1], -(a * e[0] + c * e[1]))
    }

    /// Horizontal orthonormal frame rotated by `angle` from the chart axes.
    pub fn frame(&self, p: Point3, angle: f64) -> Frame3 {
        let il = self.base.inv_lambda(p.base());
        let (s, c) = angle.sin_cos();
        Frame3 {
            at: p,
            x: self.lift(p, [il * c, il * s]),
            y: self.lift(p, [-il * s, il * c]),
            xi: self.xi(),
        }
    }

    /// Riemannian cross product: `⟨u∧v, w⟩ = det(u, v, w)`.
    pub fn wedge(&self, p: Point3, u: &Vec3, v: &Vec3) -> Vec3 {
        self.volume_factor(p) * self.metric_inv(p) * u.cross(v)
    }

    /// `J X = X ∧ ξ`.
    pub fn j_op(&self, p: Point3, x: &Vec3) -> Vec3 {
        self.wedge(p, x, &self.xi())
    }

    pub fn vertical_part(&self, p: Point3, v: &Vec3) -> Vec3 {
        self.xi() * self.inner(p, v, &self.xi())
    }

    pub fn horizontal_part(&self, p: Point3, v: &Vec3) -> Vec3 {
        v - self.vertical_part(p, v)
    }

    /// The flow of `ξ`: a translation in `t`.
    pub fn vertical_flow(&self, p: Point3, t: f64) -> Point3 {
        Point3::new(p.x, p.y, p.t + t)
    }

    /// Largest change of a metric component under the flow by `t`; the
    /// differential of the flow is the identity in this chart.
    pub fn flow_isometry_residual(&self, p: Point3, t: f64) -> f64 {
        (self.metric(self.vertical_flow(p, t)) - self.metric(p)).amax()
    }

    /// Largest component of the Lie derivative of the metric along `ξ`.
    pub fn killing_residual(&self, p: Point3) -> f64 {
        self.metric_partials_fd(p)[2].amax()
    }

    /// Orthonormality defect of the horizontal lift of a base-orthonormal pair
    /// and the orientation `det(X, Y, ξ)`.
    pub fn submersion_check(&self, p: Point3, angle: f64) -> (f64, f64) {
        let f = self.frame(p, angle);
        let g = self.metric(p);
        let m = nalgebra::Matrix3::from_columns(&[f.x, f.y, f.xi]);
        let gram = m.transpose() * g * m;
        let defect = (gram - Matrix3::identity()).amax();
        let det = self.volume_factor(p) * m.determinant();
        (defect, det)
    }
}

/// Connection coefficients `Γ[k][i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel(pub [[[f64; 3]; 3]; 3]);

impl Christoffel {
    /// `Γ(u, v)^k = Γ^k_ij u^i v^j`.
    pub fn apply(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        Vec3::from_fn(|k, _| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += self.0[k][i][j] * u[i] * v[j];
                }
            }
            s
        })
    }

    pub fn max_abs_diff(&self, o: &Christoffel) -> f64 {
        let mut m = 0.0f64;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    m = m.max((self.0[k][i][j] - o.0[k][i][j]).abs());
                }
            }
        }
        m
    }
}
