use nalgebra::Matrix3;

use super::{Point3, SubmersionModel, Vec3};
use crate::error::{GeomError, Result};
use crate::ode::Dopri5;

/// A solved boundary-value problem between two points of the total space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot3 {
    /// Initial velocity reaching the target at time 1.
    pub velocity: Vec3,
    pub distance: f64,
    pub miss: f64,
}

impl SubmersionModel {
    /// `exp_p(v)`: the geodesic with initial velocity `v` at time 1.
    pub fn exp(&self, p: Point3, v: &Vec3) -> Result<Point3> {
        let rhs = |_t: f64, y: &[f64; 6]| {
            let q = Point3::new(y[0], y[1], y[2]);
            let g = self.christoffel3(q).ok()?;
            let w = Vec3::new(y[3], y[4], y[5]);
            let a = g.apply(&w, &w);
            Some([y[3], y[4], y[5], -a[0], -a[1], -a[2]])
        };
        let r = Dopri5::default().integrate(rhs, 0.0, [p.x, p.y, p.t, v[0], v[1], v[2]], 1.0, None, |_, _| true)?;
        Ok(Point3::new(r.y[0], r.y[1], r.y[2]))
    }

    /// Distance by Newton shooting on the initial velocity.
    pub fn shoot3(&self, p: Point3, q: Point3) -> Result<Shot3> {
        let mut v = q.coords() - p.coords();
        let target = q.coords();
        let mut e = self.exp(p, &v)?.coords() - target;
        for it in 0..60 {
            let miss = self.norm(q, &e);
            if miss < 1e-12 {
                return Ok(Shot3 {
                    velocity: v,
                    distance: self.norm(p, &v),
                    miss,
                });
            }
            let h = 1e-7;
            let mut jac = Matrix3::zeros();
            for k in 0..3 {
                let mut w = v;
                w[k] += h;
                let ek = self.exp(p, &w)?.coords() - target;
                jac.set_column(k, &((ek - e) / h));
            }
            let step = jac.lu().solve(&(-e)).ok_or(GeomError::NoConvergence {
                what: "total-space shooting (singular Jacobian)",
                iterations: it,
                residual: miss,
            })?;
            let mut t = 1.0;
            loop {
                let nv = v + step * t;
                if let Ok(r) = self.exp(p, &nv) {
                    let ne = r.coords() - target;
                    if self.norm(q, &ne) < miss || t < 1e-3 {
                        v = nv;
                        e = ne;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-6 {
                    return Err(GeomError::NoConvergence {
                        what: "total-space shooting",
                        iterations: it,
                        residual: miss,
                    });
                }
            }
        }
        let miss = self.norm(q, &e);
        if miss < 1e-9 {
            return Ok(Shot3 {
                velocity: v,
                distance: self.norm(p, &v),
                miss,
            });
        }
        Err(GeomError::NoConvergence {
            what: "total-space shooting",
            iterations: 60,
            residual: miss,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::HadamardModel;

    #[test]
    fn product_distance_is_pythagorean() {
        let m = SubmersionModel::product(HadamardModel::poincare());
        let (p, q) = (Point3::new(0.0, 0.0, 0.0), Point3::new(0.5, 0.0, 0.8));
        let d = m.shoot3(p, q).unwrap().distance;
        let base = 2.0 * 0.5f64.atanh();
        assert!((d - base.hypot(0.8)).abs() < 1e-9);
    }

    #[test]
    fn flow_preserves_distance() {
        let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
        let (p, q) = (Point3::new(0.1, 0.2, 0.0), Point3::new(-0.3, 0.1, 0.4));
        let d0 = m.shoot3(p, q).unwrap().distance;
        let d1 = m.shoot3(m.vertical_flow(p, 1.3), m.vertical_flow(q, 1.3)).unwrap().distance;
        assert!((d0 - d1).abs() < 1e-9);
        assert!(m.flow_isometry_residual(p, 1.3) <= 1e-10);
    }
}
