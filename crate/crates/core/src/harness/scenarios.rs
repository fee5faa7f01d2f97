//! Execution of single scenarios.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Command, Config, ConfigError, CurveSpec, CylinderSpec, CurvatureSpec, FoliateSpec, GeodesicSpec, LeafFamily, ScenarioSpec, SweepSpec, VerifySpec};
use super::report::{num, Check, RunReport, Table};
use crate::base::foliation::{foliation_from_infinity, foliation_orthogonal, foot_of_perpendicular, leaf_separation};
use crate::base::geodesic::DEFAULT_SPACING;
use crate::base::{
    distance, ideal_geodesic, triangle_checks, wrap_pi, BaseCurve, ChartDomain, CompleteGeodesic, CurvatureProfile,
    GeodesicCircle, GeodesicPath, HadamardModel, IdealPoint, ModelKind, Point2, PrescribedCurve,
};
use crate::error::{GeomError, Result};
use crate::submersion::{Point3, SubmersionModel, Tangent3};
use crate::surface::{cylinder_geometry, hypothesis_check, VerticalCylinder};
use crate::sweep::{convexity_check, intersect, simple_end_test, sweep_classify, Classification, PlaneFoliation, SweepSettings, VerticalPlane};

pub const ANCHOR_TAU: &str = "bundle curvature: covariant derivative of the Killing field is tau times the cross product";
pub const ANCHOR_TAU_ORIENTED: &str = "bundle curvature in an oriented frame: D_X xi = -tau Y, D_Y xi = tau X";
pub const ANCHOR_K_HOR: &str = "sectional curvature of horizontal planes equals kappa - 3 tau^2";
pub const ANCHOR_K_VERT: &str = "sectional curvature of vertical planes equals tau^2";
pub const ANCHOR_KILLING: &str = "unit Killing field and Riemannian submersion";
pub const ANCHOR_TRIANGLE: &str = "comparison inequalities for geodesic triangles in a Hadamard surface";
pub const ANCHOR_DISTANCE: &str = "hyperbolic distance in the Poincare disk";
pub const ANCHOR_LEAVES: &str = "orthogonal and ideal-point geodesic families foliate the base";
pub const ANCHOR_FEET: &str = "unique perpendicular foot on a complete geodesic";
pub const ANCHOR_CYLINDER: &str = "vertical cylinders: II = [[0, -tau], [-tau, k_g]], H = k_g/2, K = 0, K_e = -tau^2";
pub const ANCHOR_HYPOTHESIS: &str = "principal curvatures exceed |tau|; vertical planes sit exactly on the boundary";
pub const ANCHOR_CONVEX: &str = "sections by transversal vertical planes are strictly convex";
pub const ANCHOR_SWEEP: &str = "the plane sweep: sphere, simple end, or Killing graph over a convex domain";
pub const ANCHOR_SIMPLE_END: &str = "simple end: one ideal boundary point and compact avoiding sections";

/// Command-line overrides applied on top of the config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
}

struct Ctx<'a> {
    config: &'a Config,
    model: SubmersionModel,
    rng: ChaCha8Rng,
    /// Multiplies every check tolerance.
    ts: f64,
}

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    evidence: BTreeMap<String, Value>,
    tables: BTreeMap<String, Table>,
}

impl Outcome {
    fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.evidence.insert(key.into(), v.into());
    }
}

/// Runs the named scenario. Module failures and panics are captured in the
/// report; only an unknown name is an error.
pub fn run_scenario(config: &Config, name: &str, opts: &RunOptions) -> std::result::Result<RunReport, ConfigError> {
    let spec = config.scenario(name).ok_or_else(|| ConfigError {
        file: None,
        message: format!("unknown scenario {name:?}"),
    })?;
    Ok(run_spec(config, spec, opts))
}

pub(crate) fn run_spec(config: &Config, spec: &ScenarioSpec, opts: &RunOptions) -> RunReport {
    let seed = opts.seed.or(spec.seed).unwrap_or(config.seed);
    let ts = opts.tol_scale.unwrap_or(config.tol_scale) * spec.tol_scale.unwrap_or(1.0);
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<Outcome> {
        let mut ctx = Ctx {
            config,
            model: config.model(&spec.model)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            ts,
        };
        match spec.command() {
            Command::Verify => verify(&mut ctx, spec.verify.as_ref().unwrap()),
            Command::Curvature => curvature(&mut ctx, spec.curvature.as_ref().unwrap()),
            Command::Geodesic => geodesic(&mut ctx, spec.geodesic.as_ref().unwrap()),
            Command::Foliate => foliate(&mut ctx, spec.foliate.as_ref().unwrap()),
            Command::Cylinder => cylinder(&mut ctx, spec.cylinder.as_ref().unwrap()),
            Command::Sweep => sweep(&mut ctx, spec.sweep.as_ref().unwrap()),
        }
    }));
    let (outcome, error) = match result {
        Ok(Ok(o)) => (o, None),
        Ok(Err(e)) => (Outcome::default(), Some(e.to_string())),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Outcome::default(), Some(format!("panic: {msg}")))
        }
    };
    RunReport {
        scenario: spec.name.clone(),
        command: spec.command().as_str().into(),
        model: spec.model.clone(),
        passed: error.is_none() && outcome.checks.iter().all(|c| c.passed),
        checks: outcome.checks,
        evidence: outcome.evidence,
        error,
        seed,
        tol_scale: ts,
        config_hash: config.hash.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        wall_clock_s: start.elapsed().as_secs_f64(),
        tables: outcome.tables,
    }
}

fn random_base(rng: &mut ChaCha8Rng, base: &HadamardModel, radius: f64) -> Point2 {
    match base.domain() {
        ChartDomain::UnitDisk => Point2::polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)),
        ChartDomain::Plane => Point2::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)),
    }
}

fn random_points(ctx: &mut Ctx, n: usize, radius: f64, t: [f64; 2]) -> Vec<(Point3, f64)> {
    (0..n)
        .map(|_| {
            let p = random_base(&mut ctx.rng, ctx.model.base(), radius);
            let tt = ctx.rng.gen_range(t[0]..=t[1]);
            (Point3::new(p.x, p.y, tt), ctx.rng.gen_range(0.0..TAU))
        })
        .collect()
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

struct VerifyRow {
    p: Point3,
    tau: f64,
    kappa: f64,
    k_hor: f64,
    k_vert: f64,
    res_hor: f64,
    res_vert: f64,
    fit_residual: f64,
    single_direction: f64,
    rotation: f64,
    oriented: f64,
    declared: Option<f64>,
    killing: f64,
    lift_defect: f64,
    orientation: f64,
}

fn verify_point(model: &SubmersionModel, p: Point3, angle: f64) -> Result<VerifyRow> {
    let fit = model.fit_tau(p, 0.0)?;
    let rotated = model.fit_tau(p, angle)?;
    let c = model.curvature_sample(p, angle)?;
    let declared = model.analytic_tau(p.base());
    let f = model.frame(p, angle);
    let xi = model.xi();
    let dx = model.covariant_derivative(|_| xi, &Tangent3::new(p, f.x))?;
    let dy = model.covariant_derivative(|_| xi, &Tangent3::new(p, f.y))?;
    let tau_d = declared.unwrap_or(fit.tau);
    let oriented = model.norm(p, &(dx + f.y * tau_d)).max(model.norm(p, &(dy - f.x * tau_d)));
    let (lift_defect, det) = model.submersion_check(p, angle);
    Ok(VerifyRow {
        p,
        tau: fit.tau,
        kappa: c.kappa,
        k_hor: c.k_hor,
        k_vert: c.k_vert,
        res_hor: c.res_hor,
        res_vert: c.res_vert,
        fit_residual: fit.residual,
        single_direction: fit.frame_agreement,
        rotation: (rotated.tau - fit.tau).abs(),
        oriented,
        declared,
        killing: model.killing_residual(p),
        lift_defect,
        orientation: (det - 1.0).abs(),
    })
}

fn curvature_checks(out: &mut Outcome, rows: &[VerifyRow], ts: f64, hor: Option<f64>, vert: Option<f64>) {
    out.checks.push(Check::at_most("sectional_horizontal", ANCHOR_K_HOR, max_of(rows.iter().map(|r| r.res_hor)), 1e-4 * ts));
    out.checks.push(Check::at_most("sectional_vertical", ANCHOR_K_VERT, max_of(rows.iter().map(|r| r.res_vert)), 1e-4 * ts));
    if let Some(e) = hor {
        let d = max_of(rows.iter().map(|r| (r.k_hor - e).abs()));
        out.checks.push(Check::at_most("expected_k_hor", ANCHOR_K_HOR, d, 1e-4 * ts).with_detail(format!("expected {e}")));
    }
    if let Some(e) = vert {
        let d = max_of(rows.iter().map(|r| (r.k_vert - e).abs()));
        out.checks.push(Check::at_most("expected_k_vert", ANCHOR_K_VERT, d, 1e-4 * ts).with_detail(format!("expected {e}")));
    }
}

fn curvature_table(rows: &[VerifyRow], extra: bool) -> Table {
    let mut h = vec!["x", "y", "t", "tau", "kappa", "K_hor", "K_vert", "res1", "res2"];
    if extra {
        h.extend(["fit_residual", "frame_agreement"]);
    }
    let mut t = Table::new(&h);
    for r in rows {
        let mut row: Vec<String> = [r.p.x, r.p.y, r.p.t, r.tau, r.kappa, r.k_hor, r.k_vert, r.res_hor, r.res_vert]
            .iter()
            .map(|v| num(*v))
            .collect();
        if extra {
            row.push(num(r.fit_residual));
            row.push(num(r.single_direction));
        }
        t.push(row);
    }
    t
}

fn verify(ctx: &mut Ctx, spec: &VerifySpec) -> Result<Outcome> {
    let pts = random_points(ctx, spec.samples, spec.radius, spec.t_range);
    let model = &ctx.model;
    let rows: Vec<VerifyRow> = pts.par_iter().map(|&(p, a)| verify_point(model, p, a)).collect::<Result<_>>()?;
    let ts = ctx.ts;
    let mut out = Outcome::default();
    out.checks.push(Check::at_most("tau_fit_residual", ANCHOR_TAU, max_of(rows.iter().map(|r| r.fit_residual)), 1e-6 * ts));
    out.checks.push(Check::at_most(
        "tau_frame_independence",
        ANCHOR_TAU,
        max_of(rows.iter().map(|r| r.single_direction.max(r.rotation))),
        1e-6 * ts,
    ));
    out.checks.push(
        Check::at_most("tau_frame_agreement", ANCHOR_TAU_ORIENTED, max_of(rows.iter().map(|r| r.oriented)), 1e-6 * ts)
            .with_detail(format!("model {}", ctx.model.describe())),
    );
    if rows.iter().all(|r| r.declared.is_some()) {
        let d = max_of(rows.iter().map(|r| (r.tau - r.declared.unwrap()).abs()));
        out.checks.push(Check::at_most("tau_declared", ANCHOR_TAU, d, 1e-6 * ts));
        if rows.iter().all(|r| r.declared == Some(0.0)) {
            out.checks.push(Check::at_most("tau_vanishes", ANCHOR_TAU, max_of(rows.iter().map(|r| r.tau.abs())), 1e-8 * ts));
        }
    }
    curvature_checks(&mut out, &rows, ts, spec.expect_k_hor, spec.expect_k_vert);
    out.checks.push(Check::at_most("killing_residual", ANCHOR_KILLING, max_of(rows.iter().map(|r| r.killing)), 1e-8 * ts));
    out.checks.push(Check::at_most(
        "horizontal_lift",
        ANCHOR_KILLING,
        max_of(rows.iter().map(|r| r.lift_defect.max(r.orientation))),
        1e-8 * ts,
    ));
    out.note("points", rows.len());
    out.note("tau_range", json!([rows.iter().map(|r| r.tau).fold(f64::INFINITY, f64::min), max_of(rows.iter().map(|r| r.tau))]));
    out.tables.insert(String::new(), curvature_table(&rows, true));
    Ok(out)
}

fn curvature(ctx: &mut Ctx, spec: &CurvatureSpec) -> Result<Outcome> {
    let mut pts: Vec<(Point3, f64)> = spec.points.iter().map(|p| (Point3::new(p[0], p[1], p[2]), 0.0)).collect();
    pts.extend(random_points(ctx, spec.samples, spec.radius, spec.t_range));
    if pts.is_empty() {
        return Err(GeomError::InvalidInput("curvature scenario has no points".into()));
    }
    let model = &ctx.model;
    let rows: Vec<VerifyRow> = pts.par_iter().map(|&(p, a)| verify_point(model, p, a)).collect::<Result<_>>()?;
    let mut out = Outcome::default();
    curvature_checks(&mut out, &rows, ctx.ts, spec.expect_k_hor, spec.expect_k_vert);
    out.note("points", rows.len());
    out.tables.insert(String::new(), curvature_table(&rows, false));
    Ok(out)
}

fn poincare_distance(a: f64, p: Point2, q: Point2) -> f64 {
    let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
    (1.0 + 2.0 * d2 / ((1.0 - p.norm().powi(2)) * (1.0 - q.norm().powi(2)))).acosh() / a
}

fn geodesic(ctx: &mut Ctx, spec: &GeodesicSpec) -> Result<Outcome> {
    let base = ctx.model.base().clone();
    let tri: Vec<[Point2; 3]> = (0..spec.triangles)
        .map(|_| std::array::from_fn(|_| random_base(&mut ctx.rng, &base, spec.radius)))
        .collect();
    let pairs: Vec<[Point2; 2]> = (0..spec.distance_pairs)
        .map(|_| std::array::from_fn(|_| random_base(&mut ctx.rng, &base, spec.radius)))
        .collect();
    let reports: Vec<_> = tri.par_iter().map(|t| triangle_checks(&base, t[0], t[1], t[2])).collect::<Result<_>>()?;
    let ts = ctx.ts;
    let mut out = Outcome::default();
    let min = |f: &dyn Fn(&crate::base::TriangleReport) -> f64| reports.iter().map(f).fold(f64::INFINITY, f64::min);
    if !reports.is_empty() {
        out.checks.push(Check::at_least_zero("law_of_cosines", ANCHOR_TRIANGLE, min(&|r| r.cosine_slack), 1e-6 * ts));
        out.checks.push(Check::at_least_zero("double_law", ANCHOR_TRIANGLE, min(&|r| r.double_slack), 1e-6 * ts));
        out.checks.push(Check::at_least_zero("angle_sum", ANCHOR_TRIANGLE, min(&|r| r.angle_sum_slack), 1e-6 * ts));
    }
    if !pairs.is_empty() {
        let ModelKind::Poincare { a } = *base.kind() else {
            return Err(GeomError::InvalidInput("distance_pairs need a Poincaré base".into()));
        };
        let d: Vec<f64> = pairs
            .par_iter()
            .map(|p| Ok((distance(&base, p[0], p[1])? - poincare_distance(a, p[0], p[1])).abs()))
            .collect::<Result<_>>()?;
        out.checks.push(Check::at_most("closed_form_distance", ANCHOR_DISTANCE, max_of(d.into_iter()), 1e-6 * ts));
    }
    let mut t = Table::new(&["a", "b", "c", "alpha", "beta", "gamma", "cosine_slack", "double_slack", "angle_sum_slack"]);
    for r in &reports {
        t.push(
            [r.a, r.b, r.c, r.alpha, r.beta, r.gamma, r.cosine_slack, r.double_slack, r.angle_sum_slack]
                .iter()
                .map(|v| num(*v))
                .collect(),
        );
    }
    out.note("triangles", reports.len());
    out.note("distance_pairs", pairs.len());
    out.tables.insert(String::new(), t);
    Ok(out)
}

/// Dense scan of `d(p, α(s))` around the foot: the minimum must be the foot
/// and the distance must fall before it and rise after it.
fn foot_is_unique(base: &HadamardModel, path: &GeodesicPath, p: Point2, s_foot: f64) -> Result<bool> {
    let (lo, hi) = path.s_range();
    let (a, b) = ((s_foot - 3.0).max(lo), (s_foot + 3.0).min(hi));
    let n = 60;
    let grid: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    let d: Vec<f64> = grid
        .iter()
        .map(|&s| distance(base, p, path.state_at(s)?.point))
        .collect::<Result<_>>()?;
    let step = (b - a) / n as f64;
    let k = (0..d.len()).min_by(|&i, &j| d[i].total_cmp(&d[j])).unwrap();
    let falls = d[..=k].windows(2).all(|w| w[1] < w[0] + 1e-12);
    let rises = d[k..].windows(2).all(|w| w[1] > w[0] - 1e-12);
    Ok(falls && rises && (grid[k] - s_foot).abs() <= step)
}

fn foliate(ctx: &mut Ctx, spec: &FoliateSpec) -> Result<Outcome> {
    let base = ctx.model.base().clone();
    let (polylines, reference, params): (Vec<Vec<Point2>>, GeodesicPath, Vec<f64>) = match spec.family {
        LeafFamily::Orthogonal {
            origin,
            psi,
            s_range,
            leaves,
            half_length,
        } => {
            let alpha = GeodesicPath::trace(
                &base,
                Point2::new(origin[0], origin[1]),
                psi,
                s_range[0] - 4.0,
                s_range[1] + 4.0,
                DEFAULT_SPACING,
            )?;
            let grid: Vec<f64> = (0..leaves)
                .map(|k| s_range[0] + (s_range[1] - s_range[0]) * k as f64 / (leaves - 1) as f64)
                .collect();
            let l = foliation_orthogonal(&alpha, &grid, half_length, DEFAULT_SPACING)?;
            (l.iter().map(|g| g.chart_polyline()).collect(), alpha, grid)
        }
        LeafFamily::FromInfinity { x0, leaves } => {
            let grid: Vec<IdealPoint> = (1..=leaves).map(|k| IdealPoint::new(x0 + TAU * k as f64 / (leaves + 1) as f64)).collect();
            let l = foliation_from_infinity(&base, IdealPoint::new(x0), &grid)?;
            let first = l[0].path.clone();
            (l.iter().map(|g| g.path.chart_polyline()).collect(), first, grid.iter().map(|x| x.angle()).collect())
        }
    };
    let sep = leaf_separation(&base, &polylines, spec.window);
    let feet_pts: Vec<Point2> = (0..spec.feet).map(|_| random_base(&mut ctx.rng, &base, spec.radius)).collect();
    let feet: Vec<_> = feet_pts
        .par_iter()
        .map(|&p| {
            let f = foot_of_perpendicular(&reference, p)?;
            let unique = foot_is_unique(&base, &reference, p, f.s)?;
            Ok((p, f, unique))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    out.checks.push(
        Check::flag("leaves_disjoint", ANCHOR_LEAVES, sep.disjoint(), format!(
            "min distance {:e} between leaves {:?}, sample gap {:e}, chord error {:e}",
            sep.min_distance, sep.closest_pair, sep.resolution, sep.chord_error
        )),
    );
    if !feet.is_empty() {
        out.checks.push(Check::at_most("foot_orthogonality", ANCHOR_FEET, max_of(feet.iter().map(|f| f.1.orthogonality)), 1e-4 * ctx.ts));
        let bad = feet.iter().filter(|f| !f.2).count();
        out.checks.push(Check::flag("foot_unique", ANCHOR_FEET, bad == 0, format!("{bad} of {} scans disagree", feet.len())));
    }
    out.note("leaves", polylines.len());
    out.note("min_leaf_distance", sep.min_distance);
    let mut lt = Table::new(&["leaf", "parameter", "samples"]);
    for (k, (p, l)) in params.iter().zip(&polylines).enumerate() {
        lt.push(vec![k.to_string(), num(*p), l.len().to_string()]);
    }
    out.tables.insert("leaves".into(), lt);
    let mut ft = Table::new(&["x", "y", "s", "distance", "orthogonality", "unique"]);
    for (p, f, u) in &feet {
        ft.push(vec![num(p.x), num(p.y), num(f.s), num(f.distance), num(f.orthogonality), u.to_string()]);
    }
    out.tables.insert("feet".into(), ft);
    Ok(out)
}

fn build_curve(base: &HadamardModel, c: &CurveSpec) -> Result<(Arc<dyn BaseCurve>, [f64; 2])> {
    Ok(match *c {
        CurveSpec::Circle { center, radius } => {
            let g = GeodesicCircle::new(base, Point2::new(center[0], center[1]), radius, 0.0)?;
            let l = g.circumference();
            (Arc::new(g), [0.0, l])
        }
        CurveSpec::Geodesic { point, psi, half_length } => {
            let g = PrescribedCurve::new(base, Point2::new(point[0], point[1]), psi, CurvatureProfile::constant(0.0), -half_length, half_length)?;
            (Arc::new(g), [-half_length, half_length])
        }
        CurveSpec::Prescribed {
            point,
            psi,
            k0,
            k1,
            w,
            phase,
            half_length,
        } => {
            let prof = CurvatureProfile { k0, k1, w, phase };
            let g = PrescribedCurve::new(base, Point2::new(point[0], point[1]), psi, prof, -half_length, half_length)?;
            (Arc::new(g), [-half_length, half_length])
        }
    })
}

fn cylinder(ctx: &mut Ctx, spec: &CylinderSpec) -> Result<Outcome> {
    let base = ctx.model.base().clone();
    let mut curves = spec.curves.clone();
    for _ in 0..spec.random_curves {
        let p = random_base(&mut ctx.rng, &base, 0.5);
        curves.push(CurveSpec::Prescribed {
            point: [p.x, p.y],
            psi: ctx.rng.gen_range(0.0..TAU),
            k0: ctx.rng.gen_range(-1.5..1.5),
            k1: ctx.rng.gen_range(0.0..0.5),
            w: ctx.rng.gen_range(0.5..3.0),
            phase: ctx.rng.gen_range(0.0..TAU),
            half_length: 0.8,
        });
    }
    let n = spec.points_per_curve.max(1);
    let mut jobs = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        let (curve, s) = build_curve(&base, c)?;
        let cyl = VerticalCylinder::new(curve, s, [-1.0, 1.0], [40, 20]);
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|k| [s[0] + (s[1] - s[0]) * (k + 1) as f64 / (n + 1) as f64, ctx.rng.gen_range(-0.8..0.8)])
            .collect();
        jobs.push((ci, cyl, pts));
    }
    let model = &ctx.model;
    let rows: Vec<Vec<_>> = jobs
        .par_iter()
        .map(|(ci, cyl, pts)| pts.iter().map(|u| Ok((*ci, cylinder_geometry(model, cyl, u[0], u[1])?))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let rows: Vec<_> = rows.into_iter().flatten().collect();
    let ts = ctx.ts;
    let mut out = Outcome::default();
    let g = || rows.iter().map(|r| &r.1);
    out.checks.push(Check::at_most("second_fundamental_form", ANCHOR_CYLINDER, max_of(g().map(|c| c.ii_defect())), 1e-5 * ts));
    out.checks.push(Check::at_most("mean_curvature", ANCHOR_CYLINDER, max_of(g().map(|c| (c.mean - 0.5 * c.k_g).abs())), 1e-5 * ts));
    out.checks.push(Check::at_most("gauss_curvature", ANCHOR_CYLINDER, max_of(g().map(|c| c.gauss.abs())), 1e-5 * ts));
    out.checks.push(Check::at_most(
        "extrinsic_curvature",
        ANCHOR_CYLINDER,
        max_of(g().map(|c| (c.extrinsic + c.tau * c.tau).abs())),
        1e-5 * ts,
    ));
    out.checks.push(Check::at_most("angle_function", ANCHOR_CYLINDER, max_of(g().map(|c| c.nu.abs())), 1e-8 * ts));
    if let Some(e) = spec.expect_extrinsic {
        let d = max_of(g().map(|c| (c.extrinsic - e).abs()));
        out.checks.push(Check::at_most("expected_extrinsic", ANCHOR_CYLINDER, d, 1e-5 * ts).with_detail(format!("expected {e}")));
    }
    if spec.totally_geodesic {
        out.checks.push(Check::at_most("totally_geodesic", ANCHOR_CYLINDER, max_of(g().map(|c| c.ii.abs().max())), 1e-6 * ts));
    }
    if let Some(e) = spec.expect_hypothesis_margin {
        let mut worst = f64::INFINITY;
        let mut fails = true;
        for (_, cyl, pts) in &jobs {
            let h = hypothesis_check(model, &cyl.surface, pts, 1e-6 * ts)?;
            worst = worst.min(h.worst_margin);
            fails &= !h.passes;
        }
        out.checks.push(Check::at_most("hypothesis_margin", ANCHOR_HYPOTHESIS, (worst - e).abs(), 1e-6 * ts).with_detail(format!("worst margin {worst:e}")));
        out.checks.push(Check::flag("hypothesis_fails", ANCHOR_HYPOTHESIS, fails, "every cylinder fails the strict hypothesis"));
        out.note("hypothesis_margin", worst);
    }
    out.note("curves", curves.len());
    out.note("points", rows.len());
    let mut t = Table::new(&["curve", "s", "t", "k_g", "tau", "ii11", "ii12", "ii21", "ii22", "H", "K", "Ke", "nu"]);
    for (ci, c) in &rows {
        let mut r = vec![ci.to_string()];
        r.extend(
            [c.s, c.t, c.k_g, c.tau, c.ii[(0, 0)], c.ii[(0, 1)], c.ii[(1, 0)], c.ii[(1, 1)], c.mean, c.gauss, c.extrinsic, c.nu]
                .iter()
                .map(|v| num(*v)),
        );
        t.push(r);
    }
    out.tables.insert(String::new(), t);
    Ok(out)
}

fn foliation_of(model: &SubmersionModel, spec: &SweepSpec) -> Result<PlaneFoliation> {
    let beta = match (spec.plane_ends, spec.origin, spec.psi) {
        (Some(e), _, _) => {
            let alpha = ideal_geodesic(model.base(), IdealPoint::new(e[0]), IdealPoint::new(e[1]))?;
            CompleteGeodesic::of(&alpha).orthogonal_at(model.base(), 0.0)?
        }
        (None, Some(o), Some(psi)) => CompleteGeodesic::new(Point2::new(o[0], o[1]), psi),
        _ => return Err(GeomError::InvalidInput("sweep needs plane_ends or origin and psi".into())),
    };
    PlaneFoliation::uniform(beta, spec.t_range[0], spec.t_range[1], spec.dt)
}

fn sweep(ctx: &mut Ctx, spec: &SweepSpec) -> Result<Outcome> {
    let model = ctx.model.clone();
    let surface = ctx.config.surface(&spec.surface, &model)?;
    let fol = foliation_of(&model, spec)?;
    let settings = SweepSettings::default();
    let rep = sweep_classify(&model, &surface, &fol, &settings);
    let label = format!("{:?}", rep.classification);
    let ts = ctx.ts;
    let mut out = Outcome::default();
    if let Some(e) = &spec.expect {
        out.checks.push(Check::flag("classification", ANCHOR_SWEEP, &label == e, format!("{label}: {}", rep.evidence.join("; "))));
    }
    if let Some(e) = spec.expect_end_angle {
        let d = rep.end_angle.map(|a| wrap_pi(a - e).abs()).unwrap_or(f64::INFINITY);
        out.checks.push(Check::at_most("end_angle", ANCHOR_SWEEP, d, settings.end_tolerance * ts));
    }
    let stage_ok = (rep.classification != Classification::PlaneKillingGraph || rep.horizontal_normal_points.is_empty())
        && (rep.horizontal_normal_points.is_empty() || rep.stage == 1);
    out.checks.push(Check::flag("stage_consistency", ANCHOR_SWEEP, stage_ok, format!("stage {}", rep.stage)));
    if rep.classification == Classification::PlaneKillingGraph {
        let ok = rep.projection_injective != Some(false) && rep.projection_convex != Some(false);
        out.checks.push(Check::flag(
            "convex_projection",
            ANCHOR_SWEEP,
            ok,
            format!("injective {:?}, convex {:?}", rep.projection_injective, rep.projection_convex),
        ));
    }
    let mut variants = Vec::new();
    if spec.check_halving {
        variants.push(("halving_stable", fol.halved()));
    }
    if spec.check_reversal {
        variants.push(("reversal_stable", fol.reversed()));
    }
    for (name, f) in variants {
        let other = sweep_classify(&model, &surface, &f, &settings);
        let ok = rep.classification == Classification::Inconclusive || other.classification == rep.classification;
        out.checks.push(Check::flag(name, ANCHOR_SWEEP, ok, format!("{label} vs {:?}", other.classification)));
    }
    if spec.convex_planes > 0 {
        // draw planes in batches until enough of them cut the surface
        let want = spec.convex_planes;
        let (mut cutting, mut drawn, mut tested, mut bad, mut skipped) = (0usize, 0usize, 0usize, 0usize, 0usize);
        while cutting < want && drawn < 10 * want {
            let planes: Vec<CompleteGeodesic> = (0..want)
                .map(|_| {
                    let t = ctx.rng.gen_range(spec.t_range[0]..spec.t_range[1]);
                    let psi = ctx.rng.gen_range(0.0..PI);
                    fol.beta.at(model.base(), t).map(|(p, _)| CompleteGeodesic::new(p, psi))
                })
                .collect::<Result<_>>()?;
            let res: Vec<Option<(usize, usize)>> = planes
                .par_iter()
                .map(|g| match intersect(&model, &surface, &VerticalPlane::new(*g)) {
                    Ok(cs) => {
                        let bad = cs.iter().filter(|c| !convexity_check(c, settings.convexity_margin).passes).count();
                        Ok(Some((cs.len(), bad)))
                    }
                    Err(GeomError::TangencySuspected { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?;
            for r in res {
                if cutting == want {
                    break;
                }
                drawn += 1;
                match r {
                    Some((n, b)) if n > 0 => {
                        cutting += 1;
                        tested += n;
                        bad += b;
                    }
                    Some(_) => {}
                    None => skipped += 1,
                }
            }
        }
        out.checks.push(Check::flag(
            "sections_convex",
            ANCHOR_CONVEX,
            bad == 0 && cutting == want,
            format!(
                "{tested} sections from {cutting} cutting planes ({drawn} drawn), {bad} not strictly convex, {skipped} planes near tangency"
            ),
        ));
        out.note("cutting_planes", cutting);
        out.note("convex_sections_tested", tested);
    }
    if spec.simple_end {
        let e = simple_end_test(&model, &surface, &settings)?;
        if let Some(x) = spec.expect_simple_end {
            out.checks.push(Check::flag("simple_end", ANCHOR_SIMPLE_END, e.passes == x, format!("passes {} theta0 {:?}", e.passes, e.theta0)));
        }
        out.note("simple_end", serde_json::to_value(&e).unwrap_or(Value::Null));
    }
    let mut t = Table::new(&["t", "components", "compact", "diameters", "convex", "transversality", "tracked", "perturbed", "skipped"]);
    let join = |v: Vec<String>| v.join(";");
    for s in &rep.slices {
        t.push(vec![
            num(s.t),
            s.components.to_string(),
            join(s.compact.iter().map(|b| b.to_string()).collect()),
            join(s.diameters.iter().map(|d| num(*d)).collect()),
            join(s.convex.iter().map(|b| b.to_string()).collect()),
            num(s.transversality),
            s.tracked.map(|k| k.to_string()).unwrap_or_default(),
            s.perturbed.to_string(),
            s.skipped.to_string(),
        ]);
    }
    out.tables.insert("slices".into(), t);
    if spec.export_curves {
        let mut ct = Table::new(&["t", "component", "vertex", "sigma", "z", "x", "y", "height"]);
        for &tt in &fol.t_grid {
            let Ok(cs) = fol.plane(&model, tt).and_then(|p| intersect(&model, &surface, &p)) else {
                continue;
            };
            for (k, c) in cs.iter().enumerate() {
                for (i, (q, p)) in c.plane_coords.iter().zip(&c.points).enumerate() {
                    ct.push(vec![num(tt), k.to_string(), i.to_string(), num(q[0]), num(q[1]), num(p.x), num(p.y), num(p.t)]);
                }
            }
        }
        out.tables.insert("curves".into(), ct);
    }
    out.note("classification", label);
    out.note("sweep", serde_json::to_value(&rep).unwrap_or(Value::Null));
    Ok(out)
}
