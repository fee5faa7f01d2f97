use serde::Serialize;

use super::{Christoffel, Point3, SubmersionModel, Vec3};
use crate::error::{GeomError, Result};

/// Least-squares fit of `∇_X ξ = τ X∧ξ` over a horizontal orthonormal pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauFit {
    pub tau: f64,
    pub tau_x1: f64,
    pub tau_x2: f64,
    /// `max_i ‖∇_{X_i} ξ − τ X_i∧ξ‖`.
    pub residual: f64,
    /// `|τ_{X1} − τ_{X2}|`.
    pub frame_agreement: f64,
}

/// Sectional curvatures of the horizontal plane and a vertical plane at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub point: Point3,
    pub tau: f64,
    pub kappa: f64,
    pub k_hor: f64,
    pub k_vert: f64,
    /// `|K(X,Y) − (κ − 3τ²)|`
    pub res_hor: f64,
    /// `|K(X,ξ) − τ²|`
    pub res_vert: f64,
}

impl SubmersionModel {
    /// `∇_X V` for a vector field given by its chart components.
    pub fn covariant_derivative<F>(&self, field: F, x: &super::Tangent3) -> Result<Vec3>
    where
        F: Fn(Point3) -> Vec3,
    {
        let p = x.at;
        let gamma = self.christoffel3(p)?;
        let d = |h: f64| (field(p.offset(&x.v, h)) - field(p.offset(&x.v, -h))) / (2.0 * h);
        let dv = (4.0 * d(1e-5) - d(2e-5)) / 3.0;
        Ok(dv + gamma.apply(&x.v, &field(p)))
    }

    /// Fits `τ` at `p` from the frame rotated by `angle`.
    pub fn fit_tau(&self, p: Point3, angle: f64) -> Result<TauFit> {
        let f = self.frame(p, angle);
        let xi = self.xi();
        let mut num = [0.0; 2];
        let mut den = [0.0; 2];
        let mut parts = Vec::with_capacity(2);
        for (k, x) in [f.x, f.y].iter().enumerate() {
            let d = self.covariant_derivative(|_| xi, &super::Tangent3::new(p, *x))?;
            let jx = self.j_op(p, x);
            num[k] = self.inner(p, &d, &jx);
            den[k] = self.inner(p, &jx, &jx);
            parts.push((d, jx));
        }
        let tau = (num[0] + num[1]) / (den[0] + den[1]);
        let residual = parts
            .iter()
            .map(|(d, jx)| self.norm(p, &(d - jx * tau)))
            .fold(0.0, f64::max);
        let (t1, t2) = (num[0] / den[0], num[1] / den[1]);
        Ok(TauFit {
            tau,
            tau_x1: t1,
            tau_x2: t2,
            residual,
            frame_agreement: (t1 - t2).abs(),
        })
    }

    /// `τ` at `p`; fails when the defining identity does not fit.
    pub fn compute_tau(&self, p: Point3) -> Result<TauFit> {
        let fit = self.fit_tau(p, 0.0)?;
        if fit.residual > 1e-6 {
            return Err(GeomError::FitFailure {
                residual: fit.residual,
                tolerance: 1e-6,
            });
        }
        Ok(fit)
    }

    /// `∂_m Γ` by central differences with one Richardson pass.
    fn christoffel_derivatives(&self, p: Point3) -> Result<[Christoffel; 3]> {
        let mut out = [Christoffel([[[0.0; 3]; 3]; 3]); 3];
        for (m, o) in out.iter_mut().enumerate() {
            let mut e = Vec3::zeros();
            e[m] = 1.0;
            let d = |h: f64| -> Result<[[[f64; 3]; 3]; 3]> {
                let a = self.christoffel3(p.offset(&e, h))?;
                let b = self.christoffel3(p.offset(&e, -h))?;
                Ok(std::array::from_fn(|k| {
                    std::array::from_fn(|i| std::array::from_fn(|j| (a.0[k][i][j] - b.0[k][i][j]) / (2.0 * h)))
                }))
            };
            let (d1, d2) = (d(1e-5)?, d(5e-6)?);
            *o = Christoffel(std::array::from_fn(|k| {
                std::array::from_fn(|i| std::array::from_fn(|j| (4.0 * d2[k][i][j] - d1[k][i][j]) / 3.0))
            }));
        }
        Ok(out)
    }

    /// Riemann tensor `R[l][k][i][j]` with `R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l`.
    pub fn riemann(&self, p: Point3) -> Result<[[[[f64; 3]; 3]; 3]; 3]> {
        let g = self.christoffel3(p)?.0;
        let dg = self.christoffel_derivatives(p)?;
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for l in 0..3 {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let mut v = dg[i].0[l][j][k] - dg[j].0[l][i][k];
                        for m in 0..3 {
                            v += g[l][i][m] * g[m][j][k] - g[l][j][m] * g[m][i][k];
                        }
                        r[l][k][i][j] = v;
                    }
                }
            }
        }
        Ok(r)
    }

    /// Sectional curvature of the plane spanned by `u`, `v`.
    pub fn sectional_curvature(&self, p: Point3, u: &Vec3, v: &Vec3) -> Result<f64> {
        let gram = self.inner(p, u, u) * self.inner(p, v, v) - self.inner(p, u, v).powi(2);
        let scale = self.inner(p, u, u) * self.inner(p, v, v);
        if !(gram > 1e-12 * scale) {
            return Err(GeomError::DegenerateSpan);
        }
        let r = self.riemann(p)?;
        let mut rv = Vec3::zeros();
        for l in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        s += r[l][k][i][j] * u[i] * v[j] * v[k];
                    }
                }
            }
            rv[l] = s;
        }
        Ok(self.inner(p, &rv, u) / gram)
    }

    /// Both sectional-curvature identities at `p`, with `τ` from the fit.
    pub fn curvature_sample(&self, p: Point3, angle: f64) -> Result<CurvatureSample> {
        let tau = self.compute_tau(p)?.tau;
        let kappa = self.base().kappa(p.base());
        let f = self.frame(p, angle);
        let k_hor = self.sectional_curvature(p, &f.x, &f.y)?;
        let k_vert = self.sectional_curvature(p, &f.x, &f.xi)?;
        Ok(CurvatureSample {
            point: p,
            tau,
            kappa,
            k_hor,
            k_vert,
            res_hor: (k_hor - (kappa - 3.0 * tau * tau)).abs(),
            res_vert: (k_vert - tau * tau).abs(),
        })
    }

    /// O'Neill tensor `A_X Y = (∇_{X^h} Y^h)^v + (∇_{X^h} Y^v)^h`.
    ///
    /// `Y` is extended to a field with constant coefficients in the frame `(E1, E2, ξ)`.
    pub fn tensor_a(&self, p: Point3, x: &Vec3, y: &Vec3) -> Result<Vec3> {
        let xh = self.horizontal_part(p, x);
        let (yh, yv) = self.split_extended(p, y);
        let t = super::Tangent3::new(p, xh);
        let a = self.covariant_derivative(&yh, &t)?;
        let b = self.covariant_derivative(&yv, &t)?;
        Ok(self.vertical_part(p, &a) + self.horizontal_part(p, &b))
    }

    /// O'Neill tensor `T_X Y = (∇_{X^v} Y^v)^h + (∇_{X^v} Y^h)^v`.
    pub fn tensor_t(&self, p: Point3, x: &Vec3, y: &Vec3) -> Result<Vec3> {
        let xv = self.vertical_part(p, x);
        let (yh, yv) = self.split_extended(p, y);
        let t = super::Tangent3::new(p, xv);
        let a = self.covariant_derivative(&yv, &t)?;
        let b = self.covariant_derivative(&yh, &t)?;
        Ok(self.horizontal_part(p, &a) + self.vertical_part(p, &b))
    }

    /// Horizontal and vertical parts of the constant-coefficient extension of `y`.
    fn split_extended<'a>(&'a self, p: Point3, y: &Vec3) -> (impl Fn(Point3) -> Vec3 + 'a, impl Fn(Point3) -> Vec3 + 'a) {
        let f = self.frame(p, 0.0);
        let g = self.metric(p);
        let c1 = (f.x.transpose() * g * y)[(0, 0)];
        let c2 = (f.y.transpose() * g * y)[(0, 0)];
        let c3 = (f.xi.transpose() * g * y)[(0, 0)];
        (
            move |q: Point3| {
                let fq = self.frame(q, 0.0);
                fq.x * c1 + fq.y * c2
            },
            move |_q: Point3| Vec3::new(0.0, 0.0, c3),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::Tangent3;
    use super::*;
    use crate::base::HadamardModel;

    #[test]
    fn tau_of_rotational_bundle() {
        let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
        let fit = m.compute_tau(Point3::new(0.3, -0.2, 0.7)).unwrap();
        assert!((fit.tau - 0.5).abs() < 1e-9, "{fit:?}");
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn sign_lock() {
        let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
        let p = Point3::new(0.1, 0.4, 0.0);
        let f = m.frame(p, 0.4);
        let xi = m.xi();
        let dx = m.covariant_derivative(|_| xi, &Tangent3::new(p, f.x)).unwrap();
        let dy = m.covariant_derivative(|_| xi, &Tangent3::new(p, f.y)).unwrap();
        assert!((dx + f.y * 0.5).amax() < 1e-9);
        assert!((dy - f.x * 0.5).amax() < 1e-9);
    }

    #[test]
    fn hyperbolic_plane_curvature() {
        let m = SubmersionModel::product(HadamardModel::poincare());
        let s = m.curvature_sample(Point3::new(0.2, 0.1, 0.0), 0.0).unwrap();
        assert!((s.k_hor + 1.0).abs() < 1e-6 && s.k_vert.abs() < 1e-6, "{s:?}");
    }

    #[test]
    fn bundle_curvatures() {
        let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
        let s = m.curvature_sample(Point3::new(-0.3, 0.2, 1.0), 0.7).unwrap();
        assert!((s.k_hor + 1.75).abs() < 1e-5 && (s.k_vert - 0.25).abs() < 1e-5, "{s:?}");
    }

    #[test]
    fn oneill_tensors() {
        let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
        let p = Point3::new(0.25, 0.1, 0.0);
        let f = m.frame(p, 1.1);
        let a = m.tensor_a(p, &f.x, &f.y).unwrap();
        assert!((a - f.xi * 0.5).amax() < 1e-7, "{a}");
        let t = m.tensor_t(p, &f.xi, &f.x).unwrap();
        assert!(t.amax() < 1e-7, "{t}");
    }
}
