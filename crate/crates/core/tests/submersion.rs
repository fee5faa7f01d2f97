use killing_geom::base::HadamardModel;
use killing_geom::submersion::{Point3, SubmersionModel, Vec3};

fn models() -> Vec<SubmersionModel> {
    vec![
        SubmersionModel::product(HadamardModel::poincare()),
        SubmersionModel::product(HadamardModel::warped_disk(1.0, 0.3)),
        SubmersionModel::e_kappa_tau(1.0, 0.25),
        SubmersionModel::e_kappa_tau(1.0, 1.0),
        SubmersionModel::warped_bundle(1.0, 0.3, 0.5),
    ]
}

fn points() -> Vec<Point3> {
    vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(0.4, -0.3, 1.2),
        Point3::new(-0.6, 0.5, -2.0),
        Point3::new(0.1, 0.8, 0.5),
    ]
}

#[test]
fn christoffel_symbols_agree_with_finite_differences() {
    for m in models() {
        for p in points() {
            let a = m.christoffel3(p).unwrap();
            let b = m.christoffel3_fd(p).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-5, "{}: {}", m.describe(), a.max_abs_diff(&b));
        }
    }
}

#[test]
fn volume_is_the_base_area_times_fiber_length() {
    // ξ is unit and orthogonal to the horizontal lifts, so √det g = λ²
    for m in models() {
        for p in points() {
            let lam = m.base().lambda(p.base());
            assert!((m.metric(p).determinant().sqrt() - lam * lam).abs() < 1e-10);
            assert!((m.volume_factor(p) - lam * lam).abs() < 1e-10);
        }
    }
}

#[test]
fn fibers_are_unit_speed_geodesics() {
    for m in models() {
        let p = Point3::new(0.3, -0.2, 0.1);
        let q = m.exp(p, &Vec3::new(0.0, 0.0, 1.7)).unwrap();
        assert!((q.x - p.x).abs() < 1e-9 && (q.y - p.y).abs() < 1e-9);
        assert!((q.t - 1.8).abs() < 1e-9);
        assert!((m.norm(p, &m.xi()) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn xi_is_killing_and_the_flow_is_an_isometry() {
    for m in models() {
        for p in points() {
            assert!(m.killing_residual(p) < 1e-8);
            assert!(m.flow_isometry_residual(p, 0.9) < 1e-12);
            let (r1, r2) = m.submersion_check(p, 0.3);
            assert!(r1 < 1e-8 && (r2 - 1.0).abs() < 1e-8, "{r1} {r2}");
        }
    }
}

#[test]
fn bundle_curvature_matches_the_declared_value() {
    for m in models() {
        for p in points() {
            let fit = m.compute_tau(p).unwrap();
            let declared = m.analytic_tau(p.base()).unwrap();
            assert!(fit.residual < 1e-6);
            assert!((fit.tau - declared).abs() < 1e-6, "{}: {} vs {declared}", m.describe(), fit.tau);
        }
    }
}

#[test]
fn homogeneous_models_have_closed_form_curvatures() {
    for tau0 in [0.25, 0.5, 1.0] {
        let m = SubmersionModel::e_kappa_tau(1.0, tau0);
        for p in points() {
            for angle in [0.0, 1.1, 2.5] {
                let s = m.curvature_sample(p, angle).unwrap();
                assert!((s.k_hor - (-1.0 - 3.0 * tau0 * tau0)).abs() < 1e-4);
                assert!((s.k_vert - tau0 * tau0).abs() < 1e-4);
            }
        }
    }
}

#[test]
fn product_distance_is_pythagorean() {
    let m = SubmersionModel::product(HadamardModel::poincare());
    let (p, q) = (Point3::new(0.0, 0.0, 0.0), Point3::new(0.5, 0.0, 1.0));
    let d = m.shoot3(p, q).unwrap().distance;
    let base = 2.0 * 0.5f64.atanh();
    assert!((d - (base * base + 1.0).sqrt()).abs() < 1e-6);
}

#[test]
fn flipped_form_reverses_the_bundle_curvature() {
    let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
    let f = m.with_flipped_form();
    for p in points() {
        let t = f.compute_tau(p).unwrap();
        assert!((t.tau + 0.5).abs() < 1e-6);
        // the declared value is kept, so the two disagree
        assert_eq!(f.analytic_tau(p.base()), Some(0.5));
    }
}
