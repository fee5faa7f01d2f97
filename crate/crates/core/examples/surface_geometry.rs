//! Principal curvatures of a geodesic sphere in H^2 x R against their
//! closed forms.

use killing_geom::base::HadamardModel;
use killing_geom::submersion::{Point3, SubmersionModel};
use killing_geom::surface::{geodesic_sphere, surface_geometry, SphereFixture};

fn main() -> killing_geom::Result<()> {
    let m = SubmersionModel::product(HadamardModel::poincare());
    let f = geodesic_sphere(&m, Point3::new(0.1, -0.2, 0.3), 1.0, [40, 80])?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>10}", "theta", "k1", "k2", "expected 1", "expected 2", "nu");
    for theta in [0.3, 0.8, 1.2, 1.57, 2.2] {
        let u = [theta, 0.7];
        let g = surface_geometry(&m, &f.surface, u)?;
        let (e1, e2) = f.expected_curvatures(SphereFixture::theta(u));
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        println!("{theta:>6.2} {:>12.8} {:>12.8} {lo:>12.8} {hi:>12.8} {:>+10.5}", g.k1, g.k2, g.nu);
    }
    Ok(())
}
