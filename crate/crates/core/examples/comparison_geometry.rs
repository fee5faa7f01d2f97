//! Random geodesic triangles in three strict Hadamard bases: the law of
//! cosines, the double law and the angle sum hold as inequalities.

use killing_geom::base::{triangle_checks, HadamardModel, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> killing_geom::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let models = [
        HadamardModel::poincare(),
        HadamardModel::scaled_poincare(1.5),
        HadamardModel::warped_disk(1.0, 0.3),
    ];
    for m in &models {
        let mut worst = [f64::INFINITY; 3];
        for _ in 0..200 {
            let mut pt = || Point2::polar(0.8 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let (p, q, r) = (pt(), pt(), pt());
            let t = triangle_checks(m, p, q, r)?;
            worst[0] = worst[0].min(t.cosine_slack);
            worst[1] = worst[1].min(t.double_slack);
            worst[2] = worst[2].min(t.angle_sum_slack);
        }
        println!(
            "{:<32} min slack: cosines {:+.3e}  double {:+.3e}  angles {:+.3e}",
            m.describe(),
            worst[0],
            worst[1],
            worst[2]
        );
    }
    Ok(())
}
