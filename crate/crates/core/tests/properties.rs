use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use killing_geom::base::*;
use killing_geom::submersion::{Point3, SubmersionModel};
use killing_geom::surface::{killing_graph, surface_geometry, GraphDomain};
use killing_geom::sweep::{convexity_check, IntersectionCurve};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk_point(max_r: f64) -> impl Strategy<Value = Point2> {
    (0.0..max_r, 0.0..TAU).prop_map(|(r, a)| Point2::polar(r, a))
}

fn hyp(p: Point2, q: Point2) -> f64 {
    let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
    (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distance_is_symmetric_and_closed_form(p in disk_point(0.85), q in disk_point(0.85)) {
        prop_assume!(p.dist(&q) > 1e-3);
        let m = HadamardModel::poincare();
        let d1 = distance(&m, p, q).unwrap();
        let d2 = distance(&m, q, p).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-8);
        prop_assert!((d1 - hyp(p, q)).abs() < 1e-6);
    }

    #[test]
    fn warped_triangles_are_thin(p in disk_point(0.8), q in disk_point(0.8), r in disk_point(0.8)) {
        prop_assume!(p.dist(&q) > 1e-2 && q.dist(&r) > 1e-2 && r.dist(&p) > 1e-2);
        let m = HadamardModel::warped_disk(1.0, 0.3);
        let t = triangle_checks(&m, p, q, r).unwrap();
        prop_assert!(t.min_slack() >= -1e-6, "{t:?}");
        prop_assert!(t.a + t.b >= t.c - 1e-9 && t.b + t.c >= t.a - 1e-9 && t.c + t.a >= t.b - 1e-9);
    }

    #[test]
    fn ideal_endpoint_is_the_moebius_image(p in disk_point(0.8), psi in -PI..PI) {
        let m = HadamardModel::poincare();
        let pc = Complex64::new(p.x, p.y);
        let w = Complex64::from_polar(1.0, psi);
        let end = (w + pc) / (Complex64::new(1.0, 0.0) + pc.conj() * w);
        let x = ideal_point(&m, p, m.unit_tangent(p, psi)).unwrap();
        prop_assert!(wrap_pi(x.angle() - end.arg()).abs() < 1e-6);
    }

    #[test]
    fn fermi_round_trip(o in disk_point(0.5), psi in 0.0..TAU, s in -2.0..2.0f64, d in -1.5..1.5f64) {
        let m = HadamardModel::scaled_poincare(1.3);
        let g = CompleteGeodesic::new(o, psi);
        let p = g.from_fermi(&m, s, d).unwrap();
        let (s2, d2) = g.to_fermi(&m, p).unwrap();
        prop_assert!((s - s2).abs() < 1e-6 && (d - d2).abs() < 1e-6);
        let (s3, d3) = g.reversed().to_fermi(&m, p).unwrap();
        prop_assert!((s + s3).abs() < 1e-6 && (d + d3).abs() < 1e-6);
    }

    #[test]
    fn wrapping_stays_in_range(a in -100.0..100.0f64) {
        let w = wrap_pi(a);
        prop_assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
        let k = (a - w) / TAU;
        prop_assert!((k - k.round()).abs() < 1e-9);
        let w2 = wrap_2pi(a);
        prop_assert!((0.0..TAU + 1e-12).contains(&w2));
    }

    #[test]
    fn homogeneous_bundle_curvature(tau0 in -1.0..1.0f64, p in disk_point(0.8), t in -3.0..3.0f64, angle in 0.0..TAU) {
        let m = SubmersionModel::e_kappa_tau(1.0, tau0);
        let q = Point3::new(p.x, p.y, t);
        let fit = m.fit_tau(q, angle).unwrap();
        prop_assert!(fit.residual < 1e-6);
        prop_assert!((fit.tau - tau0).abs() < 1e-6);
        let s = m.curvature_sample(q, angle).unwrap();
        prop_assert!(s.res_hor < 1e-4 && s.res_vert < 1e-4);
    }

    #[test]
    fn ellipses_are_convex_both_ways(a in 0.2..3.0f64, b in 0.2..3.0f64, rot in 0.0..PI, phase in 0.0..TAU) {
        let n = 400;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let s = phase + TAU * k as f64 / n as f64;
                let (x, y) = (a * s.cos(), b * s.sin());
                [x * rot.cos() - y * rot.sin(), x * rot.sin() + y * rot.cos()]
            })
            .collect();
        let fwd = convexity_check(&IntersectionCurve::from_plane_polyline(pts.clone(), true, false), 1e-4);
        prop_assert!(fwd.passes);
        prop_assert!((fwd.turning - TAU).abs() < 1e-6);
        let mut rev = pts;
        rev.reverse();
        let back = convexity_check(&IntersectionCurve::from_plane_polyline(rev, true, false), 1e-4);
        prop_assert!(back.passes);
        prop_assert!((back.turning + TAU).abs() < 1e-6);
    }

    #[test]
    fn flipping_negates_the_principal_curvatures(c in -1.0..1.0f64, d in -1.0..1.0f64, r in 0.1..0.6f64, phi in 0.0..TAU) {
        let m = SubmersionModel::warped_bundle(1.0, 0.3, 0.5);
        let s = killing_graph("q", GraphDomain::Disk { radius: 0.7 }, Arc::new(move |p: Point2| c * p.x * p.x + d * p.x * p.y), [8, 16]);
        let a = surface_geometry(&m, &s, [r, phi]).unwrap();
        let b = surface_geometry(&m, &s.flipped(), [r, phi]).unwrap();
        prop_assert!((a.k1 + b.k2).abs() < 1e-8 && (a.k2 + b.k1).abs() < 1e-8 || (a.k1 + b.k1).abs() < 1e-8 && (a.k2 + b.k2).abs() < 1e-8);
        prop_assert!((a.extrinsic - b.extrinsic).abs() < 1e-8);
    }
}
