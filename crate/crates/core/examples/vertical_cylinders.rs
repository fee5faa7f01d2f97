//! Vertical cylinders over a geodesic circle: II = [[0, -tau], [-tau, k_g]],
//! zero Gauss curvature and extrinsic curvature -tau^2.

use std::sync::Arc;

use killing_geom::base::{GeodesicCircle, Point2};
use killing_geom::submersion::SubmersionModel;
use killing_geom::surface::{cylinder_geometry, VerticalCylinder};

fn main() -> killing_geom::Result<()> {
    let m = SubmersionModel::e_kappa_tau(1.0, 0.5);
    let circle = GeodesicCircle::new(m.base(), Point2::new(0.2, 0.1), 1.0, 0.0)?;
    let len = circle.circumference();
    println!("circle of radius 1: expected k_g = {:.8}", circle.expected_curvature());
    let cyl = VerticalCylinder::new(Arc::new(circle), [0.0, len], [-1.0, 1.0], [32, 8]);
    for s in [0.1, 0.4 * len, 0.8 * len] {
        let g = cylinder_geometry(&m, &cyl, s, 0.3)?;
        println!(
            "s = {s:.3}: k_g {:.6}  H {:+.6}  K {:+.1e}  K_e {:+.6}  II defect {:.1e}",
            g.k_g, g.mean, g.gauss, g.extrinsic, g.ii_defect()
        );
    }
    Ok(())
}
