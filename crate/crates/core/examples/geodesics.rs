//! Shoots geodesics in the Poincaré disk and compares their lengths with
//! the closed-form hyperbolic distance.

use killing_geom::base::{connect, HadamardModel, Point2};

fn main() -> killing_geom::Result<()> {
    let m = HadamardModel::poincare();
    let pairs = [
        (Point2::new(0.0, 0.0), Point2::new(0.5, 0.0)),
        (Point2::new(-0.3, 0.2), Point2::new(0.4, -0.5)),
        (Point2::new(0.7, 0.1), Point2::new(-0.6, 0.6)),
    ];
    println!("{:>24} {:>24} {:>14} {:>14} {:>10}", "p", "q", "shot", "closed form", "diff");
    for (p, q) in pairs {
        let (path, len) = connect(&m, p, q)?;
        let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
        let exact = (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh();
        println!(
            "{:>24} {:>24} {len:>14.10} {exact:>14.10} {:>10.2e}   ({} samples)",
            format!("({:.2}, {:.2})", p.x, p.y),
            format!("({:.2}, {:.2})", q.x, q.y),
            (len - exact).abs(),
            path.samples().len()
        );
    }
    Ok(())
}
