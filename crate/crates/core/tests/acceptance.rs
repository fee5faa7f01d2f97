//! Acceptance run: each numbered criterion is evaluated at its stated
//! tolerance and reported on one line. Exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use killing_geom::base::{connect, HadamardModel, Point2};
use killing_geom::harness::{run_suite, Check, Config, RunOptions, RunReport, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(what.into());
        }
    }
}

struct Suite<'a> {
    by_name: BTreeMap<&'a str, &'a RunReport>,
}

impl<'a> Suite<'a> {
    fn new(s: &'a SuiteReport) -> Self {
        Self {
            by_name: s.reports.iter().map(|r| (r.scenario.as_str(), r)).collect(),
        }
    }

    fn report(&self, o: &mut Outcome, name: &str) -> Option<&'a RunReport> {
        let r = self.by_name.get(name).copied();
        o.require(r.is_some(), format!("scenario {name} missing"));
        if let Some(r) = r {
            o.require(r.error.is_none(), format!("{name}: {:?}", r.error));
        }
        r
    }

    fn check(&self, o: &mut Outcome, scenario: &str, check: &str) -> Option<&'a Check> {
        let c = self.report(o, scenario)?.checks.iter().find(|c| c.name == check);
        o.require(c.is_some(), format!("{scenario}/{check} missing"));
        let c = c?;
        o.require(c.passed, format!("{scenario}/{check} failed (value {:e}, tol {:e})", c.value, c.tolerance));
        Some(c)
    }

    /// The check passed and its value is within `tol`, whatever tolerance the
    /// harness itself used.
    fn within(&self, o: &mut Outcome, scenario: &str, check: &str, tol: f64) {
        if let Some(c) = self.check(o, scenario, check) {
            o.require(c.value.abs() <= tol, format!("{scenario}/{check} = {:e} > {tol:e}", c.value));
        }
    }

    fn count(&self, o: &mut Outcome, scenario: &str, key: &str, at_least: u64) {
        let n = self.report(o, scenario).and_then(|r| r.evidence.get(key)).and_then(|v| v.as_u64());
        o.require(n.is_some_and(|n| n >= at_least), format!("{scenario}: {key} = {n:?} < {at_least}"));
    }

    fn column(&self, o: &mut Outcome, scenario: &str, table: &str, col: &str) -> Vec<f64> {
        let Some(t) = self.report(o, scenario).and_then(|r| r.tables.get(table)) else {
            o.require(false, format!("{scenario}: no table {table:?}"));
            return Vec::new();
        };
        let i = t.header.iter().position(|h| h == col).expect("column");
        t.rows.iter().map(|r| r[i].parse::<f64>().unwrap_or(f64::NAN)).collect()
    }

    fn classification(&self, o: &mut Outcome, scenario: &str) -> String {
        self.report(o, scenario)
            .and_then(|r| r.evidence.get("classification"))
            .and_then(|v| v.as_str())
            .unwrap_or("missing")
            .to_string()
    }
}

fn max_dev(xs: &[f64], target: f64) -> f64 {
    xs.iter().map(|x| (x - target).abs()).fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

const E_MODELS: [(&str, f64); 3] = [("verify-e-quarter", 0.25), ("verify-e-half", 0.5), ("verify-e-one", 1.0)];
const SPHERES: [&str; 5] = ["025", "05", "1", "15", "2"];

fn criterion_1(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    s.within(&mut o, "verify-h2xr", "tau_fit_residual", 1e-6);
    s.within(&mut o, "verify-h2xr", "tau_vanishes", 1e-8);
    s.count(&mut o, "verify-h2xr", "points", 200);
    let tau = s.column(&mut o, "verify-h2xr", "", "tau");
    o.require(max_dev(&tau, 0.0) <= 1e-8, format!("product tau off by {:e}", max_dev(&tau, 0.0)));
    for (name, tau0) in E_MODELS {
        s.within(&mut o, name, "tau_fit_residual", 1e-6);
        s.within(&mut o, name, "tau_declared", 1e-6);
        s.count(&mut o, name, "points", 200);
        let tau = s.column(&mut o, name, "", "tau");
        o.require(max_dev(&tau, tau0) <= 1e-6, format!("{name}: |tau - {tau0}| = {:e}", max_dev(&tau, tau0)));
    }
    o
}

fn criterion_2(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    for name in ["verify-h2xr", "verify-e-quarter", "verify-e-half", "verify-e-one"] {
        s.within(&mut o, name, "sectional_horizontal", 1e-4);
        s.within(&mut o, name, "sectional_vertical", 1e-4);
    }
    let kh = s.column(&mut o, "verify-e-half", "", "K_hor");
    let kv = s.column(&mut o, "verify-e-half", "", "K_vert");
    o.require(kh.len() >= 200 && max_dev(&kh, -1.75) <= 1e-4, format!("E(-1, 0.5) horizontal off by {:e}", max_dev(&kh, -1.75)));
    o.require(kv.len() >= 200 && max_dev(&kv, 0.25) <= 1e-4, format!("E(-1, 0.5) vertical off by {:e}", max_dev(&kv, 0.25)));
    o
}

fn criterion_3(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    for (name, tau0) in [
        ("cylinder-h2xr", 0.0),
        ("cylinder-e-quarter", 0.25),
        ("cylinder-e-half", 0.5),
        ("cylinder-e-one", 1.0),
        ("cylinder-warped-bundle", f64::NAN),
    ] {
        s.within(&mut o, name, "second_fundamental_form", 1e-5);
        s.count(&mut o, name, "curves", 20);
        // entrywise from the exported matrix
        let col = |c: &str, o: &mut Outcome| s.column(o, name, "", c);
        let (ii11, ii12, ii21, ii22) = (col("ii11", &mut o), col("ii12", &mut o), col("ii21", &mut o), col("ii22", &mut o));
        let (tau, kg) = (col("tau", &mut o), col("k_g", &mut o));
        let mut worst: f64 = 0.0;
        for i in 0..ii11.len() {
            worst = worst
                .max(ii11[i].abs())
                .max((ii12[i] + tau[i]).abs())
                .max((ii21[i] + tau[i]).abs())
                .max((ii22[i] - kg[i]).abs());
        }
        o.require(!ii11.is_empty() && worst <= 1e-5, format!("{name}: II defect {worst:e}"));
        if tau0.is_finite() {
            o.require(max_dev(&tau, tau0) <= 1e-6, format!("{name}: tau off by {:e}", max_dev(&tau, tau0)));
        }
    }
    let ke = s.column(&mut o, "cylinder-e-half", "", "Ke");
    o.require(max_dev(&ke, -0.25) <= 1e-5, format!("E(-1, 0.5) K_e off by {:e}", max_dev(&ke, -0.25)));
    s.within(&mut o, "cylinder-vertical-planes", "totally_geodesic", 1e-6);
    o
}

fn hyp(p: Point2, q: Point2) -> f64 {
    let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
    (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh()
}

fn criterion_4(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    for name in ["geodesic-poincare", "geodesic-poincare-curved", "geodesic-warped"] {
        for c in ["law_of_cosines", "double_law", "angle_sum"] {
            if let Some(c) = s.check(&mut o, name, c) {
                o.require(c.value >= -1e-6, format!("{name}/{}: slack {:e}", c.name, c.value));
            }
        }
        s.count(&mut o, name, "triangles", 1000);
        for c in ["cosine_slack", "double_slack", "angle_sum_slack"] {
            let v = s.column(&mut o, name, "", c);
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            o.require(v.len() >= 1000 && min >= -1e-6, format!("{name}: min {c} {min:e}"));
        }
    }
    s.within(&mut o, "geodesic-poincare", "closed_form_distance", 1e-6);
    // and independently of the harness
    let m = HadamardModel::poincare();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mut pt = || Point2::polar(0.85 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let (p, q) = (pt(), pt());
        if let Ok((_, d)) = connect(&m, p, q) {
            worst = worst.max((d - hyp(p, q)).abs());
        } else {
            worst = f64::INFINITY;
        }
    }
    o.require(worst <= 1e-6, format!("closed-form distance off by {worst:e}"));
    o
}

fn criterion_5(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    for name in ["foliate-orthogonal", "foliate-from-infinity", "foliate-warped"] {
        s.check(&mut o, name, "leaves_disjoint");
        s.count(&mut o, name, "leaves", 12);
        let gap = s
            .report(&mut o, name)
            .and_then(|r| r.evidence.get("min_leaf_distance"))
            .and_then(|v| v.as_f64())
            .unwrap_or(0.0);
        o.require(gap > 0.0, format!("{name}: leaf margin {gap:e}"));
        s.within(&mut o, name, "foot_orthogonality", 1e-4);
        s.check(&mut o, name, "foot_unique");
    }
    o
}

fn criterion_6(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    let names: Vec<String> = SPHERES
        .iter()
        .map(|r| format!("sweep-sphere-{r}-0"))
        .chain(["sweep-convex-graph".to_string()])
        .collect();
    for name in &names {
        s.check(&mut o, name, "sections_convex");
        s.count(&mut o, name, "cutting_planes", 20);
    }
    o
}

fn criterion_7(s: &Suite) -> Outcome {
    let mut o = Outcome::new();
    let mut spheres = 0;
    for r in SPHERES {
        for k in 0..3 {
            let name = format!("sweep-sphere-{r}-{k}");
            let c = s.classification(&mut o, &name);
            o.require(c == "Sphere", format!("{name}: {c}"));
            spheres += usize::from(c == "Sphere");
        }
        s.check(&mut o, &format!("sweep-sphere-{r}-0"), "halving_stable");
    }
    o.require(spheres == 15, format!("{spheres}/15 sphere runs"));
    let c = s.classification(&mut o, "sweep-convex-graph");
    o.require(c == "PlaneKillingGraph", format!("convex graph: {c}"));
    s.check(&mut o, "sweep-convex-graph", "convex_projection");
    s.check(&mut o, "sweep-convex-graph", "halving_stable");
    for (name, theta0) in [("sweep-flaring-end", 0.7), ("sweep-flaring-end-sideways", std::f64::consts::FRAC_PI_2)] {
        let c = s.classification(&mut o, name);
        o.require(c == "PlaneSimpleEnd", format!("{name}: {c}"));
        s.check(&mut o, name, "halving_stable");
        let angle = s
            .report(&mut o, name)
            .and_then(|r| r.evidence.get("sweep"))
            .and_then(|v| v.get("end_angle"))
            .and_then(|v| v.as_f64());
        let err = angle.map(|a| killing_geom::base::wrap_pi(a - theta0).abs());
        o.require(err.is_some_and(|e| e <= 0.05), format!("{name}: end angle {angle:?} vs {theta0}"));
    }
    o
}

fn criterion_8(s: &Suite, mutation: &SuiteReport) -> Outcome {
    let mut o = Outcome::new();
    s.within(&mut o, "cylinder-vertical-planes", "hypothesis_margin", 1e-6);
    s.check(&mut o, "cylinder-vertical-planes", "hypothesis_fails");
    let m = Suite::new(mutation);
    let flipped = m.by_name.get("verify-e-half-flipped");
    let frame = flipped.and_then(|r| r.checks.iter().find(|c| c.name == "tau_frame_agreement"));
    o.require(frame.is_some_and(|c| !c.passed), "flipped connection passed the frame-agreement check");
    o.require(
        mutation.failures.iter().any(|f| f == "verify-e-half-flipped/tau_frame_agreement [model e_half_flipped]"),
        "mutation failure does not name the model",
    );
    let control = m.by_name.get("verify-e-half");
    o.require(control.is_some_and(|r| r.passed), "unmutated control failed");
    o
}

fn csv_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .map(|d| {
            d.filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default()
}

fn criterion_9(config: &Config, first: &SuiteReport) -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    o.require(first.write(&a).is_ok(), "cannot write first run");
    let second = run_suite(config, &RunOptions::default());
    o.require(second.write(&b).is_ok(), "cannot write second run");
    let (ca, cb) = (csv_bytes(&a), csv_bytes(&b));
    o.require(!ca.is_empty(), "no CSV artifacts");
    o.require(ca.keys().eq(cb.keys()), "different CSV file sets");
    for (k, v) in &ca {
        o.require(cb.get(k) == Some(v), format!("{k} differs between runs"));
    }
    o.notes.insert(0, format!("{} CSV files compared", ca.len()));
    o
}

fn main() {
    let start = Instant::now();
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let config = Config::load(&configs.join("suite.toml")).expect("suite config");
    let mutation = Config::load(&configs.join("mutation.toml")).expect("mutation config");
    let suite = run_suite(&config, &RunOptions::default());
    let mutated = run_suite(&mutation, &RunOptions::default());
    let s = Suite::new(&suite);

    let results = [
        ("1", "bundle curvature identity", criterion_1(&s)),
        ("2", "sectional curvatures", criterion_2(&s)),
        ("3", "vertical cylinder geometry", criterion_3(&s)),
        ("4", "comparison geometry", criterion_4(&s)),
        ("5", "foliations", criterion_5(&s)),
        ("6", "convex sections", criterion_6(&s)),
        ("7", "sweep classification", criterion_7(&s)),
        ("8", "negative controls", criterion_8(&s, &mutated)),
        ("9", "determinism", criterion_9(&config, &suite)),
    ];
    let mut all = true;
    for (id, title, o) in &results {
        println!("criterion {id} {:<28} {}", title, if o.passed { "PASS" } else { "FAIL" });
        for n in &o.notes {
            println!("    {n}");
        }
        all &= o.passed;
    }
    println!(
        "suite: {}/{} scenarios, {}/{} checks; {:.1} s",
        suite.scenarios_passed,
        suite.scenarios_total,
        suite.checks_passed,
        suite.checks_total,
        start.elapsed().as_secs_f64()
    );
    if !suite.passed {
        for f in &suite.failures {
            println!("    failed: {f}");
        }
    }
    if !(all && suite.passed) {
        std::process::exit(1);
    }
}
