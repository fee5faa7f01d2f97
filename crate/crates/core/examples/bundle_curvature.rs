//! Bundle curvature and the two sectional-curvature identities in a few
//! Killing submersions.

use killing_geom::base::HadamardModel;
use killing_geom::submersion::{Point3, SubmersionModel};

fn main() -> killing_geom::Result<()> {
    let models = [
        SubmersionModel::product(HadamardModel::poincare()),
        SubmersionModel::e_kappa_tau(1.0, 0.5),
        SubmersionModel::warped_bundle(1.0, 0.3, 0.5),
    ];
    let p = Point3::new(0.3, -0.2, 0.7);
    for m in &models {
        let s = m.curvature_sample(p, 0.4)?;
        let fit = m.fit_tau(p, 0.4)?;
        println!("{}", m.describe());
        println!("  tau {:+.8}  (fit residual {:.1e})  kappa {:+.8}", s.tau, fit.residual, s.kappa);
        println!("  K(horizontal) {:+.8}  kappa - 3 tau^2 {:+.8}", s.k_hor, s.kappa - 3.0 * s.tau * s.tau);
        println!("  K(vertical)   {:+.8}  tau^2           {:+.8}", s.k_vert, s.tau * s.tau);
        println!("  Killing residual {:.1e}", m.killing_residual(p));
    }
    Ok(())
}
