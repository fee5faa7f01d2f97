//! Test surfaces with known geometry.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{AltChart, ImmersedSurface, ParamDomain};
use crate::base::{ModelKind, Point2};
use crate::error::{GeomError, Result};
use crate::expr::ScalarExpr;
use crate::submersion::{ConnectionForm, Point3, SubmersionModel};

fn poincare_scale(model: &SubmersionModel) -> Result<f64> {
    match model.base().kind() {
        ModelKind::Poincare { a } => Ok(*a),
        _ => Err(GeomError::InvalidInput("this fixture needs a Poincaré base".into())),
    }
}

/// `exp_c` of the base vector of length `rho` and chart direction `phi`.
fn poincare_exp(a: f64, c: Point2, rho: f64, phi: f64) -> Point2 {
    let c = Complex64::new(c.x, c.y);
    let w = Complex64::from_polar((0.5 * a * rho).tanh(), phi);
    let z = (w + c) / (Complex64::new(1.0, 0.0) + c.conj() * w);
    Point2::new(z.re, z.im)
}

/// A geodesic sphere in a product `H²(−a²) × R`, with closed-form curvatures.
#[derive(Debug, Clone)]
pub struct SphereFixture {
    pub surface: ImmersedSurface,
    pub center: Point3,
    pub radius: f64,
    pub a: f64,
}

impl SphereFixture {
    /// Principal curvatures at polar angle `theta` (inward normal):
    /// `1/R` along meridians and `a sinθ coth(a R sinθ)` along parallels.
    pub fn expected_curvatures(&self, theta: f64) -> (f64, f64) {
        let r = self.radius;
        let st = theta.sin().abs();
        let par = if st < 1e-12 {
            1.0 / r
        } else {
            self.a * st / (self.a * r * st).tanh()
        };
        (1.0 / r, par)
    }

    /// Polar angle of a sampling parameter.
    pub fn theta(u: [f64; 2]) -> f64 {
        u[0]
    }
}

/// The sphere of radius `radius` about `center` in a product model, sampled
/// on `(θ, φ)` with the pole on the fiber and a second chart with the pole
/// along the chart `x` direction.
pub fn geodesic_sphere(model: &SubmersionModel, center: Point3, radius: f64, resolution: [usize; 2]) -> Result<SphereFixture> {
    let a = poincare_scale(model)?;
    if !matches!(model.omega(), ConnectionForm::Zero) {
        return Err(GeomError::InvalidInput("sphere fixture is for product models".into()));
    }
    if !(radius > 0.0) {
        return Err(GeomError::InvalidInput("radius must be positive".into()));
    }
    let c = center.base();
    let from_dir = move |n: [f64; 3]| -> Point3 {
        let h = n[0].hypot(n[1]);
        let b = poincare_exp(a, c, radius * h, n[1].atan2(n[0]));
        Point3::new(b.x, b.y, center.t + radius * n[2])
    };
    let main = Arc::new(move |u: [f64; 2]| {
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        Ok(from_dir([st * cp, st * sp, ct]))
    });
    let alt_map = Arc::new(move |q: [f64; 2]| {
        let (st, ct) = q[0].sin_cos();
        let (sp, cp) = q[1].sin_cos();
        Ok(from_dir([ct, st * cp, st * sp]))
    });
    let to_alt = Arc::new(|u: [f64; 2]| {
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let n = [st * cp, st * sp, ct];
        [n[0].clamp(-1.0, 1.0).acos(), n[2].atan2(n[1])]
    });
    let surface = ImmersedSurface::new(
        &format!("sphere(R={radius})"),
        ParamDomain {
            u: [0.0, PI],
            v: [0.0, 2.0 * PI],
            periodic: [false, true],
            window_edges: [false; 4],
        },
        resolution,
        main,
        -1.0,
    )
    .with_alt(AltChart {
        map: alt_map,
        to_alt,
        use_alt: Arc::new(|u| u[0].sin() < 0.6),
    })
    .declared(true, true);
    Ok(SphereFixture {
        surface,
        center,
        radius,
        a,
    })
}

/// Domain of a Killing graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphDomain {
    /// Chart disk of the given radius, sampled in polar coordinates.
    Disk { radius: f64 },
    Rect { x: [f64; 2], y: [f64; 2] },
}

pub type HeightFn = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;

/// The section `(x, y) ↦ (x, y, h(x, y))`, oriented so that `ν > 0`.
pub fn killing_graph(name: &str, domain: GraphDomain, h: HeightFn, resolution: [usize; 2]) -> ImmersedSurface {
    match domain {
        GraphDomain::Disk { radius } => {
            let hp = h.clone();
            let main = Arc::new(move |u: [f64; 2]| {
                let p = Point2::polar(u[0], u[1]);
                Ok(Point3::new(p.x, p.y, hp(p)))
            });
            let alt = Arc::new(move |q: [f64; 2]| {
                let p = Point2::new(q[0], q[1]);
                Ok(Point3::new(p.x, p.y, h(p)))
            });
            ImmersedSurface::new(
                name,
                ParamDomain {
                    u: [0.0, radius],
                    v: [0.0, 2.0 * PI],
                    periodic: [false, true],
                    window_edges: [false, true, false, false],
                },
                resolution,
                main,
                1.0,
            )
            .with_alt(AltChart {
                map: alt,
                to_alt: Arc::new(|u| [u[0] * u[1].cos(), u[0] * u[1].sin()]),
                use_alt: Arc::new(move |u| u[0] < 0.25 * radius),
            })
        }
        GraphDomain::Rect { x, y } => {
            let map = Arc::new(move |u: [f64; 2]| {
                let p = Point2::new(u[0], u[1]);
                Ok(Point3::new(p.x, p.y, h(p)))
            });
            ImmersedSurface::new(
                name,
                ParamDomain {
                    u: x,
                    v: y,
                    periodic: [false, false],
                    window_edges: [true; 4],
                },
                resolution,
                map,
                1.0,
            )
        }
    }
    .declared(false, true)
}

/// `h = c (x² − y²)`: a saddle whose sections need not be convex.
pub fn saddle_graph(c: f64, radius: f64, resolution: [usize; 2]) -> ImmersedSurface {
    killing_graph(
        "saddle",
        GraphDomain::Disk { radius },
        Arc::new(move |p| c * (p.x * p.x - p.y * p.y)),
        resolution,
    )
}

/// `{t² = −b(p)}` with `b` the Busemann function of the ideal point at chart
/// angle `theta0`, normalized to vanish at the origin. Its projection is the
/// closed horoball through the origin, so it has one end, at `theta0`.
pub fn flaring_end(model: &SubmersionModel, theta0: f64, u_max: f64, v_max: f64, resolution: [usize; 2]) -> Result<ImmersedSurface> {
    let a = poincare_scale(model)?;
    let rot = Complex64::from_polar(1.0, theta0);
    let i = Complex64::new(0.0, 1.0);
    let map = Arc::new(move |u: [f64; 2]| {
        let w = Complex64::new(u[0].sinh(), (a * u[1] * u[1]).exp());
        let z = rot * (w - i) / (w + i);
        Ok(Point3::new(z.re, z.im, u[1]))
    });
    Ok(ImmersedSurface::new(
        &format!("flaring_end(theta0={theta0})"),
        ParamDomain {
            u: [-u_max, u_max],
            v: [-v_max, v_max],
            periodic: [false, false],
            window_edges: [true; 4],
        },
        resolution,
        map,
        -1.0,
    )
    .declared(false, true))
}

/// A surface given by three expressions in `u`, `v`.
pub fn parametric(
    name: &str,
    exprs: [&str; 3],
    domain: ParamDomain,
    resolution: [usize; 2],
    orientation: f64,
) -> Result<ImmersedSurface> {
    let e: Vec<ScalarExpr> = exprs
        .iter()
        .map(|s| ScalarExpr::parse(s, &["u", "v"]))
        .collect::<Result<_>>()?;
    let map = Arc::new(move |u: [f64; 2]| {
        let p = Point3::new(e[0].eval(&u), e[1].eval(&u), e[2].eval(&u));
        if p.x.is_finite() && p.y.is_finite() && p.t.is_finite() {
            Ok(p)
        } else {
            Err(GeomError::InvalidInput(format!("surface map is not finite at {u:?}")))
        }
    });
    Ok(ImmersedSurface::new(name, domain, resolution, map, orientation))
}
