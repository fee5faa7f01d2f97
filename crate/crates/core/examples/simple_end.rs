//! A surface with one flaring end: the sweep finds the end angle and the
//! simple-end test confirms a single ideal boundary point.

use killing_geom::base::{CompleteGeodesic, HadamardModel, Point2};
use killing_geom::submersion::SubmersionModel;
use killing_geom::surface::flaring_end;
use killing_geom::sweep::{simple_end_test, sweep_classify, PlaneFoliation, SweepSettings};

fn main() -> killing_geom::Result<()> {
    let m = SubmersionModel::product(HadamardModel::poincare());
    let theta0 = 0.7;
    let s = flaring_end(&m, theta0, 12.0, 2.6, [160, 84])?;
    let settings = SweepSettings::default();
    let fol = PlaneFoliation::uniform(CompleteGeodesic::new(Point2::ORIGIN, theta0), -2.0, 6.0, 0.1)?;
    let rep = sweep_classify(&m, &s, &fol, &settings);
    println!("classification: {:?}", rep.classification);
    println!("end angle: {:?} (built with {theta0})", rep.end_angle);
    let end = simple_end_test(&m, &s, &settings)?;
    println!("shells (radius, spread):");
    for (r, spread) in &end.shells {
        println!("  {r:>8.3} {spread:.5}");
    }
    println!("single ideal point {}, avoiding sections compact {}", end.single_point, end.probes_compact);
    Ok(())
}
