//! Strict TOML configuration with include files.
//!
//! A root file may set `seed`, `tol_scale` and `workers`; it and every file
//! it includes may add to the `models` and `surfaces` catalogs and to the
//! scenario list. Unknown keys are rejected everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::base::{ChartDomain, HadamardModel, Point2};
use crate::expr::ScalarExpr;
use crate::submersion::{AnalyticTau, ConnectionForm, Point3, SubmersionModel};
use crate::surface::{self, GraphDomain, ImmersedSurface, ParamDomain};

/// Seed used when neither the config nor the command line gives one.
pub const DEFAULT_SEED: u64 = 24301;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: Option<PathBuf>,
    pub message: String,
}

impl ConfigError {
    fn new(file: Option<&Path>, message: impl Into<String>) -> Self {
        Self {
            file: file.map(Path::to_path_buf),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(p) => write!(f, "{}: {}", p.display(), self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    Poincare {
        #[serde(default = "one")]
        a: f64,
    },
    WarpedDisk {
        a: f64,
        eps: f64,
    },
    Flat,
    Conformal {
        lambda: String,
        domain: ChartDomain,
        curvature_bound: f64,
        #[serde(default = "yes")]
        complete: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Product {
        base: BaseSpec,
    },
    EKappaTau {
        a: f64,
        tau0: f64,
        /// Negates `ω` but keeps the declared `τ`: a deliberately broken model.
        #[serde(default)]
        flip_omega: bool,
    },
    WarpedBundle {
        a: f64,
        eps: f64,
        tau0: f64,
        #[serde(default)]
        flip_omega: bool,
    },
    User {
        base: BaseSpec,
        /// `[ω_x, ω_y]` in `x`, `y`.
        omega: [String; 2],
        tau: Option<String>,
        #[serde(default)]
        flip_omega: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    GeodesicSphere {
        center: [f64; 3],
        radius: f64,
        resolution: [usize; 2],
    },
    KillingGraph {
        /// Height over the base chart, in `x`, `y`.
        height: String,
        disk_radius: Option<f64>,
        /// `[[x0, x1], [y0, y1]]`
        rect: Option<[[f64; 2]; 2]>,
        resolution: [usize; 2],
    },
    SaddleGraph {
        c: f64,
        radius: f64,
        resolution: [usize; 2],
    },
    FlaringEnd {
        theta0: f64,
        u_max: f64,
        v_max: f64,
        resolution: [usize; 2],
    },
    Parametric {
        x: String,
        y: String,
        t: String,
        u: [f64; 2],
        v: [f64; 2],
        #[serde(default)]
        periodic: [bool; 2],
        #[serde(default = "all_window")]
        window_edges: [bool; 4],
        resolution: [usize; 2],
        #[serde(default = "one")]
        orientation: f64,
        #[serde(default)]
        compact: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Chart radius of the random base points.
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_t_range")]
    pub t_range: [f64; 2],
    pub expect_k_hor: Option<f64>,
    pub expect_k_vert: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureSpec {
    #[serde(default)]
    pub points: Vec<[f64; 3]>,
    #[serde(default)]
    pub samples: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_t_range")]
    pub t_range: [f64; 2],
    pub expect_k_hor: Option<f64>,
    pub expect_k_vert: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSpec {
    #[serde(default = "default_triangles")]
    pub triangles: usize,
    #[serde(default)]
    pub distance_pairs: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LeafFamily {
    /// Geodesics orthogonal to the geodesic through `origin` in direction `psi`.
    Orthogonal {
        origin: [f64; 2],
        psi: f64,
        s_range: [f64; 2],
        leaves: usize,
        #[serde(default = "default_half_length")]
        half_length: f64,
    },
    /// Geodesics from the ideal point `x0` to equally spaced ideal points.
    FromInfinity { x0: f64, leaves: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliateSpec {
    pub family: LeafFamily,
    /// Chart radius inside which leaves are compared.
    #[serde(default = "default_window")]
    pub window: f64,
    /// Random points whose feet on the first oriented geodesic are checked.
    #[serde(default)]
    pub feet: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Geodesic {
        point: [f64; 2],
        psi: f64,
        #[serde(default = "one")]
        half_length: f64,
    },
    Prescribed {
        point: [f64; 2],
        psi: f64,
        k0: f64,
        #[serde(default)]
        k1: f64,
        #[serde(default)]
        w: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default = "one")]
        half_length: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderSpec {
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    /// Additional curves with random start, direction and curvature profile.
    #[serde(default)]
    pub random_curves: usize,
    #[serde(default = "default_cylinder_points")]
    pub points_per_curve: usize,
    pub expect_extrinsic: Option<f64>,
    /// Requires `II = 0` (within the vertical-plane tolerance).
    #[serde(default)]
    pub totally_geodesic: bool,
    /// Runs the hypothesis check and compares its worst margin with this value.
    pub expect_hypothesis_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub surface: String,
    /// Foot of `β`; with `plane_ends` unset, `β` leaves it in direction `psi`.
    pub origin: Option<[f64; 2]>,
    pub psi: Option<f64>,
    /// Ideal endpoints of the base plane `P_β(0)`, as an alternative.
    pub plane_ends: Option<[f64; 2]>,
    pub t_range: [f64; 2],
    pub dt: f64,
    pub expect: Option<String>,
    pub expect_end_angle: Option<f64>,
    #[serde(default)]
    pub check_halving: bool,
    #[serde(default)]
    pub check_reversal: bool,
    /// Random transversal planes whose sections must be strictly convex.
    #[serde(default)]
    pub convex_planes: usize,
    #[serde(default)]
    pub simple_end: bool,
    pub expect_simple_end: Option<bool>,
    #[serde(default)]
    pub export_curves: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub model: String,
    #[serde(default)]
    pub tags: Vec<String>,
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
    pub verify: Option<VerifySpec>,
    pub curvature: Option<CurvatureSpec>,
    pub geodesic: Option<GeodesicSpec>,
    pub foliate: Option<FoliateSpec>,
    pub cylinder: Option<CylinderSpec>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Verify,
    Curvature,
    Geodesic,
    Foliate,
    Cylinder,
    Sweep,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Curvature => "curvature",
            Command::Geodesic => "geodesic",
            Command::Foliate => "foliate",
            Command::Cylinder => "cylinder",
            Command::Sweep => "sweep",
        }
    }
}

impl ScenarioSpec {
    pub fn command(&self) -> Command {
        self.commands()[0]
    }

    fn commands(&self) -> Vec<Command> {
        let mut c = Vec::new();
        if self.verify.is_some() {
            c.push(Command::Verify);
        }
        if self.curvature.is_some() {
            c.push(Command::Curvature);
        }
        if self.geodesic.is_some() {
            c.push(Command::Geodesic);
        }
        if self.foliate.is_some() {
            c.push(Command::Foliate);
        }
        if self.cylinder.is_some() {
            c.push(Command::Cylinder);
        }
        if self.sweep.is_some() {
            c.push(Command::Sweep);
        }
        c
    }

    pub fn is_regression(&self) -> bool {
        self.tags.iter().any(|t| t == "regression")
    }
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn all_window() -> [bool; 4] {
    [true; 4]
}
fn default_samples() -> usize {
    200
}
fn default_radius() -> f64 {
    0.8
}
fn default_t_range() -> [f64; 2] {
    [-1.0, 1.0]
}
fn default_triangles() -> usize {
    1000
}
fn default_half_length() -> f64 {
    6.0
}
fn default_window() -> f64 {
    0.9
}
fn default_cylinder_points() -> usize {
    3
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootFile {
    #[serde(default)]
    include: Vec<String>,
    seed: Option<u64>,
    tol_scale: Option<f64>,
    workers: Option<usize>,
    #[serde(default)]
    models: BTreeMap<String, ModelSpec>,
    #[serde(default)]
    surfaces: BTreeMap<String, SurfaceSpec>,
    #[serde(default)]
    scenarios: Vec<ScenarioSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    include: Vec<String>,
    #[serde(default)]
    models: BTreeMap<String, ModelSpec>,
    #[serde(default)]
    surfaces: BTreeMap<String, SurfaceSpec>,
    #[serde(default)]
    scenarios: Vec<ScenarioSpec>,
}

/// A resolved and validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub tol_scale: f64,
    pub workers: Option<usize>,
    pub models: BTreeMap<String, ModelSpec>,
    pub surfaces: BTreeMap<String, SurfaceSpec>,
    pub scenarios: Vec<ScenarioSpec>,
    /// SHA-256 over the text of every file read, in reading order.
    pub hash: String,
    pub sources: Vec<PathBuf>,
}

struct Loader {
    hasher: Sha256,
    sources: Vec<PathBuf>,
    stack: BTreeSet<PathBuf>,
    models: BTreeMap<String, ModelSpec>,
    surfaces: BTreeMap<String, SurfaceSpec>,
    scenarios: Vec<ScenarioSpec>,
}

impl Loader {
    fn read(&mut self, path: &Path) -> Result<String, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(Some(path), format!("cannot read: {e}")))?;
        self.hasher.update(text.as_bytes());
        self.hasher.update([0u8]);
        self.sources.push(path.to_path_buf());
        Ok(text)
    }

    fn absorb(
        &mut self,
        file: Option<&Path>,
        models: BTreeMap<String, ModelSpec>,
        surfaces: BTreeMap<String, SurfaceSpec>,
        scenarios: Vec<ScenarioSpec>,
    ) -> Result<(), ConfigError> {
        for (k, v) in models {
            if self.models.insert(k.clone(), v).is_some() {
                return Err(ConfigError::new(file, format!("models.{k}: defined twice")));
            }
        }
        for (k, v) in surfaces {
            if self.surfaces.insert(k.clone(), v).is_some() {
                return Err(ConfigError::new(file, format!("surfaces.{k}: defined twice")));
            }
        }
        self.scenarios.extend(scenarios);
        Ok(())
    }

    fn include(&mut self, from: Option<&Path>, base: &Path, list: &[String]) -> Result<(), ConfigError> {
        for inc in list {
            let path = base.join(inc);
            let canon = path
                .canonicalize()
                .map_err(|e| ConfigError::new(from, format!("include {inc:?}: {e}")))?;
            if !self.stack.insert(canon.clone()) {
                return Err(ConfigError::new(from, format!("include {inc:?} forms a cycle")));
            }
            let text = self.read(&path)?;
            let cat: CatalogFile = toml::from_str(&text).map_err(|e| ConfigError::new(Some(&path), e.to_string()))?;
            let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
            self.include(Some(&path), &dir, &cat.include)?;
            self.absorb(Some(&path), cat.models, cat.surfaces, cat.scenarios)?;
            self.stack.remove(&canon);
        }
        Ok(())
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let mut l = Loader {
            hasher: Sha256::new(),
            sources: Vec::new(),
            stack: BTreeSet::new(),
            models: BTreeMap::new(),
            surfaces: BTreeMap::new(),
            scenarios: Vec::new(),
        };
        let text = l.read(path)?;
        if let Ok(c) = path.canonicalize() {
            l.stack.insert(c);
        }
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::assemble(l, &text, Some(path), &dir)
    }

    /// Parses a root document; includes resolve against `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<Self, ConfigError> {
        let mut l = Loader {
            hasher: Sha256::new(),
            sources: Vec::new(),
            stack: BTreeSet::new(),
            models: BTreeMap::new(),
            surfaces: BTreeMap::new(),
            scenarios: Vec::new(),
        };
        l.hasher.update(text.as_bytes());
        l.hasher.update([0u8]);
        Self::assemble(l, text, None, dir)
    }

    fn assemble(mut l: Loader, text: &str, file: Option<&Path>, dir: &Path) -> Result<Self, ConfigError> {
        let root: RootFile = toml::from_str(text).map_err(|e| ConfigError::new(file, e.to_string()))?;
        l.include(file, dir, &root.include)?;
        l.absorb(file, root.models, root.surfaces, root.scenarios)?;
        let cfg = Config {
            seed: root.seed.unwrap_or(DEFAULT_SEED),
            tol_scale: root.tol_scale.unwrap_or(1.0),
            workers: root.workers,
            models: l.models,
            surfaces: l.surfaces,
            scenarios: l.scenarios,
            hash: format!("{:x}", l.hasher.finalize()),
            sources: l.sources,
        };
        cfg.validate().map_err(|m| ConfigError::new(file, m))?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol_scale > 0.0) {
            return Err(format!("tol_scale: must be positive, got {}", self.tol_scale));
        }
        if self.workers == Some(0) {
            return Err("workers: must be at least 1".into());
        }
        for (name, spec) in &self.models {
            build_model(spec).map_err(|e| format!("models.{name}: {e}"))?;
        }
        for (name, spec) in &self.surfaces {
            check_surface(spec).map_err(|e| format!("surfaces.{name}: {e}"))?;
        }
        let mut seen = BTreeSet::new();
        for (i, s) in self.scenarios.iter().enumerate() {
            let at = format!("scenarios[{i}] ({:?})", s.name);
            if !seen.insert(s.name.as_str()) {
                return Err(format!("{at}: duplicate scenario name"));
            }
            if !self.models.contains_key(&s.model) {
                return Err(format!("{at}.model: unknown model {:?}", s.model));
            }
            match s.commands().len() {
                1 => {}
                0 => return Err(format!("{at}: needs one of verify, curvature, geodesic, foliate, cylinder, sweep")),
                _ => return Err(format!("{at}: has more than one command section")),
            }
            if let Some(t) = s.tol_scale {
                if !(t > 0.0) {
                    return Err(format!("{at}.tol_scale: must be positive"));
                }
            }
            if let Some(sw) = &s.sweep {
                if !self.surfaces.contains_key(&sw.surface) {
                    return Err(format!("{at}.sweep.surface: unknown surface {:?}", sw.surface));
                }
                if sw.plane_ends.is_some() == (sw.origin.is_some() || sw.psi.is_some()) {
                    return Err(format!("{at}.sweep: give either plane_ends or origin and psi"));
                }
                if sw.plane_ends.is_none() && (sw.origin.is_none() || sw.psi.is_none()) {
                    return Err(format!("{at}.sweep: origin and psi go together"));
                }
                if !(sw.dt > 0.0) || !(sw.t_range[1] > sw.t_range[0]) {
                    return Err(format!("{at}.sweep: needs dt > 0 and an increasing t_range"));
                }
                if let Some(e) = &sw.expect {
                    if !["Sphere", "PlaneKillingGraph", "PlaneSimpleEnd", "Inconclusive"].contains(&e.as_str()) {
                        return Err(format!("{at}.sweep.expect: unknown classification {e:?}"));
                    }
                }
            }
            if let Some(f) = &s.foliate {
                let n = match f.family {
                    LeafFamily::Orthogonal { leaves, .. } | LeafFamily::FromInfinity { leaves, .. } => leaves,
                };
                if n < 2 {
                    return Err(format!("{at}.foliate.family.leaves: need at least two leaves"));
                }
            }
        }
        Ok(())
    }

    pub fn scenario(&self, name: &str) -> Option<&ScenarioSpec> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn model(&self, name: &str) -> crate::Result<SubmersionModel> {
        let spec = self
            .models
            .get(name)
            .ok_or_else(|| crate::GeomError::InvalidInput(format!("unknown model {name:?}")))?;
        build_model(spec)
    }

    pub fn surface(&self, name: &str, model: &SubmersionModel) -> crate::Result<ImmersedSurface> {
        let spec = self
            .surfaces
            .get(name)
            .ok_or_else(|| crate::GeomError::InvalidInput(format!("unknown surface {name:?}")))?;
        build_surface(spec, model)
    }
}

pub fn build_base(spec: &BaseSpec) -> crate::Result<HadamardModel> {
    Ok(match spec {
        BaseSpec::Poincare { a } => HadamardModel::scaled_poincare(*a),
        BaseSpec::WarpedDisk { a, eps } => HadamardModel::warped_disk(*a, *eps),
        BaseSpec::Flat => HadamardModel::flat(),
        BaseSpec::Conformal {
            lambda,
            domain,
            curvature_bound,
            complete,
        } => HadamardModel::user(lambda, *domain, *curvature_bound, *complete)?,
    })
}

pub fn build_model(spec: &ModelSpec) -> crate::Result<SubmersionModel> {
    let (m, flip) = match spec {
        ModelSpec::Product { base } => (SubmersionModel::product(build_base(base)?), false),
        ModelSpec::EKappaTau { a, tau0, flip_omega } => (SubmersionModel::e_kappa_tau(*a, *tau0), *flip_omega),
        ModelSpec::WarpedBundle {
            a,
            eps,
            tau0,
            flip_omega,
        } => (SubmersionModel::warped_bundle(*a, *eps, *tau0), *flip_omega),
        ModelSpec::User {
            base,
            omega,
            tau,
            flip_omega,
        } => {
            let form = ConnectionForm::User {
                wx: ScalarExpr::parse(&omega[0], &["x", "y"])?,
                wy: ScalarExpr::parse(&omega[1], &["x", "y"])?,
            };
            let tau = tau
                .as_deref()
                .map(|t| ScalarExpr::parse(t, &["x", "y"]).map(AnalyticTau::Expr))
                .transpose()?;
            (SubmersionModel::with_form(build_base(base)?, form, tau)?, *flip_omega)
        }
    };
    Ok(if flip { m.with_flipped_form() } else { m })
}

fn check_surface(spec: &SurfaceSpec) -> crate::Result<()> {
    let bad = |m: &str| Err(crate::GeomError::InvalidInput(m.into()));
    let res = match spec {
        SurfaceSpec::GeodesicSphere { radius, resolution, .. } => {
            if !(*radius > 0.0) {
                return bad("radius must be positive");
            }
            resolution
        }
        SurfaceSpec::KillingGraph {
            height,
            disk_radius,
            rect,
            resolution,
        } => {
            ScalarExpr::parse(height, &["x", "y"])?;
            if disk_radius.is_some() == rect.is_some() {
                return bad("give exactly one of disk_radius and rect");
            }
            resolution
        }
        SurfaceSpec::SaddleGraph { resolution, .. } | SurfaceSpec::FlaringEnd { resolution, .. } => resolution,
        SurfaceSpec::Parametric { x, y, t, resolution, .. } => {
            for e in [x, y, t] {
                ScalarExpr::parse(e, &["u", "v"])?;
            }
            resolution
        }
    };
    if res[0] < 4 || res[1] < 4 {
        return bad("resolution must be at least 4 × 4");
    }
    Ok(())
}

pub fn build_surface(spec: &SurfaceSpec, model: &SubmersionModel) -> crate::Result<ImmersedSurface> {
    check_surface(spec)?;
    Ok(match spec {
        SurfaceSpec::GeodesicSphere {
            center,
            radius,
            resolution,
        } => {
            surface::geodesic_sphere(model, Point3::new(center[0], center[1], center[2]), *radius, *resolution)?.surface
        }
        SurfaceSpec::KillingGraph {
            height,
            disk_radius,
            rect,
            resolution,
        } => {
            let h = ScalarExpr::parse(height, &["x", "y"])?;
            let domain = match (disk_radius, rect) {
                (Some(r), _) => GraphDomain::Disk { radius: *r },
                (None, Some(r)) => GraphDomain::Rect { x: r[0], y: r[1] },
                (None, None) => unreachable!(),
            };
            surface::killing_graph("killing_graph", domain, Arc::new(move |p: Point2| h.eval(&[p.x, p.y])), *resolution)
        }
        SurfaceSpec::SaddleGraph { c, radius, resolution } => surface::saddle_graph(*c, *radius, *resolution),
        SurfaceSpec::FlaringEnd {
            theta0,
            u_max,
            v_max,
            resolution,
        } => surface::flaring_end(model, *theta0, *u_max, *v_max, *resolution)?,
        SurfaceSpec::Parametric {
            x,
            y,
            t,
            u,
            v,
            periodic,
            window_edges,
            resolution,
            orientation,
            compact,
        } => surface::parametric(
            "parametric",
            [x, y, t],
            ParamDomain {
                u: *u,
                v: *v,
                periodic: *periodic,
                window_edges: *window_edges,
            },
            *resolution,
            *orientation,
        )?
        .declared(*compact, true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[models.h2r]
kind = "product"
base = { kind = "poincare" }

[[scenarios]]
name = "v"
model = "h2r"
tags = ["regression"]
[scenarios.verify]
samples = 5
"#;

    #[test]
    fn parses_and_defaults() {
        let c = Config::parse(BASE, Path::new(".")).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.scenarios[0].command(), Command::Verify);
        assert_eq!(c.scenarios[0].verify.as_ref().unwrap().radius, 0.8);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = BASE.replace("samples = 5", "samples = 5\nsampels = 3");
        let e = Config::parse(&text, Path::new(".")).unwrap_err();
        assert!(e.message.contains("sampels"), "{e}");
        let e = Config::parse(&BASE.replace("kind = \"poincare\"", "kind = \"poincare\", b = 2"), Path::new("."))
            .unwrap_err();
        assert!(e.message.contains('b'), "{e}");
    }

    #[test]
    fn type_mismatch_and_bad_reference() {
        let e = Config::parse(&BASE.replace("samples = 5", "samples = \"five\""), Path::new(".")).unwrap_err();
        assert!(e.message.contains("samples") || e.message.contains("line"), "{e}");
        let e = Config::parse(&BASE.replace("model = \"h2r\"", "model = \"nope\""), Path::new(".")).unwrap_err();
        assert!(e.message.contains("nope"), "{e}");
    }

    #[test]
    fn one_command_per_scenario() {
        let text = format!("{BASE}[scenarios.geodesic]\ntriangles = 3\n");
        assert!(Config::parse(&text, Path::new(".")).is_err());
    }

    #[test]
    fn bad_expression_is_a_config_error() {
        let text = r#"
[models.u]
kind = "user"
base = { kind = "poincare" }
omega = ["z", "0"]
"#;
        let e = Config::parse(text, Path::new(".")).unwrap_err();
        assert!(e.message.contains("models.u"), "{e}");
    }
}
