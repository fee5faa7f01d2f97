//! Two foliations of the hyperbolic plane by geodesics, with a separation
//! witness and perpendicular feet.

use std::f64::consts::TAU;

use killing_geom::base::{
    foliation_from_infinity, foliation_orthogonal, foot_of_perpendicular, leaf_separation, GeodesicPath, HadamardModel,
    IdealPoint, Point2,
};

fn main() -> killing_geom::Result<()> {
    let m = HadamardModel::poincare();
    let alpha = GeodesicPath::trace(&m, Point2::new(0.1, -0.1), 0.3, -6.0, 6.0, 0.02)?;
    let grid: Vec<f64> = (0..16).map(|k| -2.0 + 4.0 * k as f64 / 15.0).collect();
    let leaves = foliation_orthogonal(&alpha, &grid, 6.0, 0.02)?;
    let pts: Vec<_> = leaves.iter().map(|l| l.chart_polyline()).collect();
    let sep = leaf_separation(&m, &pts, 0.9);
    println!("orthogonal leaves: {} leaves, min distance {:.4}, disjoint {}", leaves.len(), sep.min_distance, sep.disjoint());

    let ends: Vec<IdealPoint> = (1..=16).map(|k| IdealPoint::new(0.5 + TAU * k as f64 / 17.0)).collect();
    let fan = foliation_from_infinity(&m, IdealPoint::new(0.5), &ends)?;
    let pts: Vec<_> = fan.iter().map(|g| g.path.chart_polyline()).collect();
    let sep = leaf_separation(&m, &pts, 0.9);
    println!("leaves from an ideal point: min distance {:.4}, disjoint {}", sep.min_distance, sep.disjoint());

    for p in [Point2::new(0.0, 0.6), Point2::new(-0.5, -0.3)] {
        let f = foot_of_perpendicular(&alpha, p)?;
        println!(
            "foot of ({:.1}, {:.1}): s = {:.6}, distance {:.6}, angle error {:.1e}",
            p.x, p.y, f.s, f.distance, f.orthogonality
        );
    }
    Ok(())
}
