//! Sweeps a geodesic sphere with vertical planes and classifies it.

use killing_geom::base::{CompleteGeodesic, HadamardModel, Point2};
use killing_geom::submersion::{Point3, SubmersionModel};
use killing_geom::surface::geodesic_sphere;
use killing_geom::sweep::{sweep_classify, PlaneFoliation, SweepSettings};

fn main() -> killing_geom::Result<()> {
    let m = SubmersionModel::product(HadamardModel::poincare());
    let r = 1.0;
    let f = geodesic_sphere(&m, Point3::new(0.1, -0.2, 0.3), r, [40, 80])?;
    let fol = PlaneFoliation::uniform(CompleteGeodesic::new(Point2::new(0.1, -0.2), 0.4), -1.3, 1.3, 0.1)?;
    let rep = sweep_classify(&m, &f.surface, &fol, &SweepSettings::default());
    println!("classification: {:?} (stage {})", rep.classification, rep.stage);
    for s in rep.slices.iter().filter(|s| s.components > 0) {
        println!(
            "  t = {:+.2}: {} section(s), diameter {:.4}, convex {:?}",
            s.t,
            s.components,
            s.diameters.first().copied().unwrap_or(f64::NAN),
            s.convex
        );
    }
    for e in &rep.evidence {
        println!("  {e}");
    }
    Ok(())
}
