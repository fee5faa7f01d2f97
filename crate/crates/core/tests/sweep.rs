use std::f64::consts::PI;
use std::sync::Arc;

use killing_geom::base::{CompleteGeodesic, HadamardModel, Point2};
use killing_geom::submersion::{Point3, SubmersionModel};
use killing_geom::surface::{flaring_end, geodesic_sphere, horizontal_normal_points, killing_graph, saddle_graph, GraphDomain};
use killing_geom::sweep::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn product() -> SubmersionModel {
    SubmersionModel::product(HadamardModel::poincare())
}

fn hyp_dist(p: Point2, q: Point2) -> f64 {
    let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
    (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh()
}

fn convex_graph(res: [usize; 2]) -> killing_geom::surface::ImmersedSurface {
    let h = Arc::new(|p: Point2| {
        let d = 2.0 * p.norm().atanh();
        0.2 * d * d
    });
    killing_graph("convex", GraphDomain::Disk { radius: 0.95 }, h, res)
}

const CENTER: Point3 = Point3 { x: 0.1, y: -0.2, t: 0.3 };

fn sphere_foliation(r: f64, psi: f64) -> PlaneFoliation {
    let c = Point2::new(CENTER.x, CENTER.y);
    PlaneFoliation::uniform(CompleteGeodesic::new(c, psi), -(r + 0.3), r + 0.3, r / 10.0).unwrap()
}

#[test]
fn sphere_sections_lie_on_the_sphere() {
    let m = product();
    let r = 0.8;
    let f = geodesic_sphere(&m, CENTER, r, [48, 96]).unwrap();
    let c = Point2::new(CENTER.x, CENTER.y);
    for off in [0.0, 0.3, 0.6] {
        let g = CompleteGeodesic::new(c, 1.1).orthogonal_at(m.base(), off).unwrap();
        let curves = intersect(&m, &f.surface, &VerticalPlane::new(g)).unwrap();
        assert_eq!(curves.len(), 1);
        let k = &curves[0];
        assert!(k.closed && !k.touches_window);
        for p in &k.points {
            let rho = hyp_dist(p.base(), c);
            assert!((rho * rho + (p.t - CENTER.t).powi(2) - r * r).abs() < 1e-6);
        }
        let rep = convexity_check(k, 1e-4);
        assert!(rep.passes, "{rep:?}");
        assert!((rep.turning.abs() - 2.0 * PI).abs() < 1e-6);
        if off == 0.0 {
            // the central section is a round circle in flat plane coordinates
            let mean = k.curvature.iter().sum::<f64>() / k.curvature.len() as f64;
            assert!((mean.abs() - 1.0 / r).abs() < 1e-3, "{mean}");
        }
    }
    let far = CompleteGeodesic::new(c, 1.1).orthogonal_at(m.base(), r + 0.2).unwrap();
    assert!(intersect(&m, &f.surface, &VerticalPlane::new(far)).unwrap().is_empty());
}

#[test]
fn graph_section_crosses_the_window() {
    let m = product();
    let s = killing_graph(
        "bowl",
        GraphDomain::Disk { radius: 0.9 },
        Arc::new(|p: Point2| 0.1 * (p.x * p.x + p.y * p.y)),
        [40, 80],
    );
    let y_axis = VerticalPlane::new(CompleteGeodesic::new(Point2::ORIGIN, PI / 2.0));
    let curves = intersect(&m, &s, &y_axis).unwrap();
    // dense sign scan of x along rays: the zero set is the diameter x = 0
    let mut changes = 0;
    let n = 2001;
    let xs: Vec<f64> = (0..n).map(|k| -0.9 + 1.8 * k as f64 / (n - 1) as f64).collect();
    for w in xs.windows(2) {
        if (w[0] < 0.0) != (w[1] < 0.0) {
            changes += 1;
        }
    }
    assert_eq!(curves.len(), changes);
    assert!(!curves[0].closed && curves[0].touches_window);
    for p in &curves[0].points {
        assert!(p.x.abs() < 1e-9);
    }
}

#[test]
fn random_sections_are_convex() {
    let m = product();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = Point2::new(CENTER.x, CENTER.y);
    for r in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let f = geodesic_sphere(&m, CENTER, r, [40, 80]).unwrap();
        for _ in 0..20 {
            let g = CompleteGeodesic::new(c, rng.gen_range(0.0..2.0 * PI))
                .orthogonal_at(m.base(), rng.gen_range(0.0..0.85 * r))
                .unwrap();
            for k in intersect(&m, &f.surface, &VerticalPlane::new(g)).unwrap() {
                assert!(k.closed);
                let rep = convexity_check(&k, 1e-4);
                assert!(rep.passes, "radius {r}: {rep:?}");
            }
        }
    }
    let s = convex_graph([40, 80]);
    for _ in 0..20 {
        let g = CompleteGeodesic::new(Point2::ORIGIN, rng.gen_range(0.0..2.0 * PI))
            .orthogonal_at(m.base(), rng.gen_range(-2.0..2.0))
            .unwrap();
        let curves = intersect(&m, &s, &VerticalPlane::new(g)).unwrap();
        assert_eq!(curves.len(), 1);
        let rep = convexity_check(&curves[0], 1e-4);
        assert!(rep.passes, "{rep:?}");
    }
}

#[test]
fn saddle_section_has_an_inflection() {
    let m = product();
    let s = saddle_graph(0.5, 0.9, [60, 120]);
    let x_axis = VerticalPlane::new(CompleteGeodesic::new(Point2::ORIGIN, 0.0));
    let curves = intersect(&m, &s, &x_axis).unwrap();
    assert_eq!(curves.len(), 1);
    let k = &curves[0];
    let rep = convexity_check(k, 1e-4);
    assert!(!rep.passes);
    assert_eq!(rep.sign_changes.len(), 2);
    // z = c·tanh²(σ/2) bends back at tanh²(σ/2) = 1/3
    for a in &rep.sign_changes {
        let i = k.arc.iter().position(|s| s >= a).unwrap();
        let sigma = k.plane_coords[i][0];
        let x = (sigma / 2.0).tanh().abs();
        assert!((x - 1.0 / 3f64.sqrt()).abs() < 0.02, "{x}");
    }
}

#[test]
fn spheres_are_classified_sphere() {
    let m = product();
    for r in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let f = geodesic_sphere(&m, CENTER, r, [40, 80]).unwrap();
        for psi in [0.4, 2.3, 4.4] {
            let fol = sphere_foliation(r, psi);
            let rep = sweep_classify(&m, &f.surface, &fol, &SweepSettings::default());
            assert_eq!(rep.classification, Classification::Sphere, "r {r} psi {psi}: {:?}", rep.evidence);
            assert_eq!(rep.stage, 1);
            assert!(!rep.horizontal_normal_points.is_empty());
        }
    }
}

#[test]
fn sphere_classification_is_stable() {
    let m = product();
    let f = geodesic_sphere(&m, CENTER, 1.0, [40, 80]).unwrap();
    let fol = sphere_foliation(1.0, 0.4);
    let s = SweepSettings::default();
    for variant in [fol.halved(), fol.reversed()] {
        let rep = sweep_classify(&m, &f.surface, &variant, &s);
        assert_eq!(rep.classification, Classification::Sphere, "{:?}", rep.evidence);
    }
}

#[test]
fn convex_graph_is_killing_graph() {
    let m = product();
    let s = convex_graph([40, 80]);
    let fol = PlaneFoliation::uniform(CompleteGeodesic::new(Point2::ORIGIN, 0.0), -4.0, 4.0, 0.1).unwrap();
    let set = SweepSettings::default();
    let r = sweep_classify(&m, &s, &fol, &set);
    assert_eq!(r.classification, Classification::PlaneKillingGraph, "{:?}", r.evidence);
    assert_eq!(r.stage, 0);
    assert_eq!(r.projection_injective, Some(true));
    assert_eq!(r.projection_convex, Some(true));
    assert!(r.min_abs_nu > 1e-6);
    assert!(horizontal_normal_points(&m, &s).unwrap().is_empty());
    for variant in [fol.halved(), fol.reversed()] {
        assert_eq!(sweep_classify(&m, &s, &variant, &set).classification, Classification::PlaneKillingGraph);
    }
    // the whole disk reaches every ideal point
    let e = simple_end_test(&m, &s, &set).unwrap();
    assert!(e.applicable && !e.single_point && !e.passes);
    assert!(e.shells[2].1 > 6.0, "{:?}", e.shells);
}

#[test]
fn flaring_end_has_simple_end() {
    let m = product();
    let th = 0.7;
    let s = flaring_end(&m, th, 12.0, 2.6, [160, 84]).unwrap();
    let fol = PlaneFoliation::uniform(CompleteGeodesic::new(Point2::ORIGIN, th), -2.0, 6.0, 0.1).unwrap();
    let set = SweepSettings::default();
    let r = sweep_classify(&m, &s, &fol, &set);
    assert_eq!(r.classification, Classification::PlaneSimpleEnd, "{:?}", r.evidence);
    assert!((r.end_angle.unwrap() - th).abs() < 0.05);
    for variant in [fol.halved()] {
        let h = sweep_classify(&m, &s, &variant, &set);
        assert_eq!(h.classification, Classification::PlaneSimpleEnd, "{:?}", h.evidence);
    }
    let e = simple_end_test(&m, &s, &set).unwrap();
    assert!(e.passes, "{e:?}");
    assert!((e.theta0.unwrap() - th).abs() < 0.05);
    assert!(e.probes.iter().all(|p| p.compact == Some(true)));
}

#[test]
fn flaring_end_sideways_needs_the_rotating_planes() {
    let m = product();
    let th = PI / 2.0;
    let s = flaring_end(&m, th, 12.0, 2.6, [160, 84]).unwrap();
    let fol = PlaneFoliation::uniform(CompleteGeodesic::new(Point2::ORIGIN, 0.0), -3.0, 3.0, 0.1).unwrap();
    let set = SweepSettings::default();
    for f in [fol.clone(), fol.reversed()] {
        let r = sweep_classify(&m, &s, &f, &set);
        assert_eq!(r.classification, Classification::PlaneSimpleEnd, "{:?}", r.evidence);
        let sec = r.secondary.as_ref().expect("secondary sweep");
        assert_eq!(sec.tilt, Some(Tilt::Tilted));
        assert!(sec.single_ideal_point);
        assert_eq!(sec.noncompact_planes, 0);
        assert!((r.end_angle.unwrap() - th).abs() < 0.05);
    }
}

#[test]
fn compact_surfaces_skip_the_end_test() {
    let m = product();
    let f = geodesic_sphere(&m, CENTER, 0.5, [24, 48]).unwrap();
    let e = simple_end_test(&m, &f.surface, &SweepSettings::default()).unwrap();
    assert!(!e.applicable && !e.passes);
}
