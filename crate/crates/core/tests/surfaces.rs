use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use killing_geom::base::{GeodesicCircle, HadamardModel, Point2};
use killing_geom::submersion::{Point3, SubmersionModel};
use killing_geom::surface::*;
use nalgebra::Matrix2;

const CENTER: Point3 = Point3 { x: 0.1, y: -0.2, t: 0.3 };

fn product() -> SubmersionModel {
    SubmersionModel::product(HadamardModel::poincare())
}

fn h(p: Point2) -> f64 {
    0.3 * p.x * p.x - 0.2 * p.x * p.y + 0.1 * p.y.powi(3)
}

/// Gradient and Hessian of `h`, by hand.
fn h_jet(p: Point2) -> ([f64; 2], Matrix2<f64>) {
    (
        [0.6 * p.x - 0.2 * p.y, -0.2 * p.x + 0.3 * p.y * p.y],
        Matrix2::new(0.6, -0.2, -0.2, 0.6 * p.y),
    )
}

fn flat_graph() -> ImmersedSurface {
    killing_graph(
        "cubic",
        GraphDomain::Rect { x: [-1.0, 1.0], y: [-1.0, 1.0] },
        Arc::new(h),
        [20, 20],
    )
}

#[test]
fn graph_in_flat_space_matches_the_hessian_oracle() {
    // in R³ with upward normal: I = δ + ∇h∇hᵀ, II = Hess h / W
    let m = SubmersionModel::product(HadamardModel::flat());
    let s = flat_graph();
    for u in [[0.1, 0.2], [-0.5, 0.7], [0.8, -0.6]] {
        let g = surface_geometry(&m, &s, u).unwrap();
        let p = g.point.base();
        let (d, hess) = h_jet(p);
        let w = (1.0 + d[0] * d[0] + d[1] * d[1]).sqrt();
        let first = Matrix2::new(1.0 + d[0] * d[0], d[0] * d[1], d[0] * d[1], 1.0 + d[1] * d[1]);
        let shape = first.try_inverse().unwrap() * hess / w;
        // S is self-adjoint for I, not symmetric; take roots of its characteristic polynomial
        let (tr, det) = (shape.trace(), shape.determinant());
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let k = [tr / 2.0 - disc, tr / 2.0 + disc];
        assert!((g.k1.min(g.k2) - k[0]).abs() < 1e-6, "{u:?}: {} {} vs {k:?}", g.k1, g.k2);
        assert!((g.k1.max(g.k2) - k[1]).abs() < 1e-6);
        assert!((g.extrinsic - det).abs() < 1e-6);
        assert!((g.mean - tr / 2.0).abs() < 1e-6);
        assert!((g.nu - 1.0 / w).abs() < 1e-9);
        // flat ambient: K = K_e
        assert!((g.gauss - det).abs() < 1e-6);
    }
}

#[test]
fn flipping_the_normal_negates_h_and_keeps_k_e() {
    let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
    let s = killing_graph("bowl", GraphDomain::Disk { radius: 0.8 }, Arc::new(|p: Point2| p.x * p.x + 0.5 * p.y), [16, 32]);
    let f = s.flipped();
    for u in [[0.3, 0.5], [0.6, 2.0]] {
        let a = surface_geometry(&m, &s, u).unwrap();
        let b = surface_geometry(&m, &f, u).unwrap();
        assert!((a.mean + b.mean).abs() < 1e-9);
        assert!((a.extrinsic - b.extrinsic).abs() < 1e-9);
        assert!((a.gauss - b.gauss).abs() < 1e-9);
        assert!((a.nu + b.nu).abs() < 1e-12);
    }
}

#[test]
fn geometry_is_invariant_under_reparametrization() {
    let m = product();
    let sphere = geodesic_sphere(&m, CENTER, 1.0, [40, 80]).unwrap().surface;
    // θ' = θ, φ' = π − φ reverses orientation
    let rev = sphere.reparametrized(Arc::new(|u: [f64; 2]| [u[0], PI - u[1]]), -sphere.orientation);
    // a nonlinear stretch of θ keeps it
    let stretch = sphere.reparametrized(
        Arc::new(|u: [f64; 2]| [u[0] + 0.1 * (u[0]).sin() * u[0] * (PI - u[0]) / PI, u[1]]),
        sphere.orientation,
    );
    for (theta, phi) in [(0.7, 1.0), (1.3, 4.0), (2.2, 2.5)] {
        let a = surface_geometry(&m, &sphere, [theta, phi]).unwrap();
        let b = surface_geometry(&m, &rev, [theta, PI - phi]).unwrap();
        assert!((a.mean - b.mean).abs() < 1e-6 && (a.extrinsic - b.extrinsic).abs() < 1e-6);
        assert!((a.nu - b.nu).abs() < 1e-9);
        // find θ' with stretch(θ') = θ by bisection
        let f = |x: f64| x + 0.1 * x.sin() * x * (PI - x) / PI - theta;
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let c = surface_geometry(&m, &stretch, [0.5 * (lo + hi), phi]).unwrap();
        assert!((a.k1 - c.k1).abs() < 1e-6 && (a.k2 - c.k2).abs() < 1e-6);
    }
}

#[test]
fn angle_function_and_tangent_part_are_unit() {
    let m = SubmersionModel::warped_bundle(1.0, 0.3, 0.5);
    let s = killing_graph("tilt", GraphDomain::Disk { radius: 0.7 }, Arc::new(|p: Point2| p.x - p.y * p.y), [8, 16]);
    for g in sample_geometry(&m, &s) {
        let g = g.unwrap();
        assert!(g.unit_defect < 1e-10);
        assert!(g.self_adjoint_residual < 1e-8);
    }
}

#[test]
fn sphere_curvatures_match_closed_form() {
    let m = product();
    let f = geodesic_sphere(&m, CENTER, 1.5, [40, 80]).unwrap();
    for theta in [0.0, 0.4, 1.0, FRAC_PI_2, 2.8, PI] {
        let g = surface_geometry(&m, &f.surface, [theta, 1.3]).unwrap();
        // 1/R along meridians, coth(R sinθ)·sinθ along parallels
        let par = if theta.sin() < 1e-12 { 1.0 / 1.5 } else { theta.sin() / (1.5 * theta.sin()).tanh() };
        let (lo, hi) = (par.min(1.0 / 1.5), par.max(1.0 / 1.5));
        assert!((g.k1.min(g.k2) - lo).abs() < 1e-6 && (g.k1.max(g.k2) - hi).abs() < 1e-6, "{theta}");
    }
    let hyp = hypothesis_check(&m, &f.surface, &[[0.5, 0.0], [1.2, 2.0], [2.5, 4.0]], 1e-6).unwrap();
    assert!(hyp.passes);
    assert!((hyp.worst_margin - 1.0 / 1.5).abs() < 1e-6);
}

#[test]
fn cylinder_routes_agree_and_match_the_circle() {
    // the cylinder module rewrites II in (ξ, T̄); the generic route does not
    let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
    let r = 0.8;
    let circle = GeodesicCircle::new(m.base(), Point2::new(0.2, 0.1), r, 0.0).unwrap();
    let len = circle.circumference();
    let cyl = VerticalCylinder::new(Arc::new(circle), [0.0, len], [-1.0, 1.0], [16, 4]);
    for (s, t) in [(0.3, 0.0), (1.7, 0.5), (4.0, -0.7)] {
        let a = cylinder_geometry(&m, &cyl, s, t).unwrap();
        let b = surface_geometry(&m, &cyl.surface, [s, t]).unwrap();
        assert!((a.k_g - 1.0 / r.tanh()).abs() < 1e-6);
        assert!((a.tau - 0.5).abs() < 1e-6);
        assert!((a.extrinsic + 0.25).abs() < 1e-5 && (b.extrinsic + 0.25).abs() < 1e-5);
        assert!((a.mean - a.k_g / 2.0).abs() < 1e-5 && (b.mean - a.mean).abs() < 1e-5);
        assert!(a.gauss.abs() < 1e-5 && b.gauss.abs() < 1e-5);
        assert!(a.ii_defect() < 1e-5);
        assert!(b.nu.abs() < 1e-12);
    }
}

#[test]
fn horizontal_normals_sit_on_the_equator() {
    let m = product();
    let f = geodesic_sphere(&m, CENTER, 1.0, [20, 40]).unwrap();
    let pts = horizontal_normal_points(&m, &f.surface).unwrap();
    assert!(!pts.is_empty());
    for u in &pts {
        assert!((u[0] - FRAC_PI_2).abs() < 1e-6, "{u:?}");
        assert!(surface_geometry(&m, &f.surface, *u).unwrap().nu.abs() <= 1e-8);
    }
    let flat = SubmersionModel::product(HadamardModel::flat());
    assert!(horizontal_normal_points(&flat, &flat_graph()).unwrap().is_empty());
}

#[test]
fn vertical_cylinders_have_nu_zero_everywhere() {
    let m = product();
    let c = GeodesicCircle::new(m.base(), Point2::ORIGIN, 0.5, 0.0).unwrap();
    let len = c.circumference();
    let cyl = VerticalCylinder::new(Arc::new(c), [0.0, len], [-1.0, 1.0], [8, 4]);
    let pts = horizontal_normal_points(&m, &cyl.surface).unwrap();
    let [nu, nv] = cyl.surface.node_counts();
    assert_eq!(pts.len(), nu * nv);
}
