//! Scenario files: schema, parsing and constraint checks.
//!
//! A scenario is TOML (or JSON when the file ends in `.json`). Every section
//! except `crack`, `boundary` and `mesh` is optional.

use cracktip_core::err::{IncrementFamily, LimitOptions};
use cracktip_core::fem::{BoundaryData, MeshParams};
use cracktip_core::model::{CrackSet, ElasticMaterial, RigidMotion};
use cracktip_core::pencil::{SpectrumOptions, DEFAULT_RANK_THRESHOLD, DEFAULT_ROOT_TOL};
use cracktip_core::singular::{AngleConvention, Side, SingularDisplacement, SingularModeSet};
use cracktip_core::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

pub type Chains = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_output")]
    pub output: String,
    /// Reserved for randomized sampling; every current step uses fixed grids.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub material: MaterialSpec,
    pub crack: CrackSpec,
    pub boundary: BoundarySpec,
    pub mesh: MeshParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub airy: Option<AirySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<ErrSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
}

fn default_output() -> String {
    "out".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub lambda: f64,
    pub mu: f64,
}

impl Default for MaterialSpec {
    fn default() -> Self {
        Self { lambda: 1.0, mu: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrackSpec {
    /// Polylines; the first vertex of the first chain is the tip.
    pub chains: Chains,
}

/// Dirichlet data on the outer circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundarySpec {
    Zero,
    Rigid { a: f64, b: f64, c: f64 },
    Singular { kappa: [f64; 2] },
    /// Rows `[θ, u_x, u_y]` with θ increasing over `[−π, π]`, interpolated
    /// linearly in the angle.
    Table { samples: Vec<[f64; 3]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AirySpec {
    /// Annulus edges for the per-annulus Hessian misfit.
    pub hessian_radii: Vec<f64>,
    pub decay_radii: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare_radius: Option<f64>,
}

impl Default for AirySpec {
    fn default() -> Self {
        Self { hessian_radii: vec![0.0, 0.1, 0.5, 1.0], decay_radii: vec![0.05, 0.1, 0.2, 0.4], poincare_radius: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlowupSpec {
    /// Strictly decreasing blow-up radii.
    pub eps: Vec<f64>,
    /// Fitting annulus in rescaled coordinates.
    pub annulus: [f64; 2],
    pub samples: usize,
    /// Also fit the Airy modes of the reconstructed dual function.
    pub airy: bool,
}

impl Default for BlowupSpec {
    fn default() -> Self {
        Self { eps: vec![0.2, 0.1, 0.05], annulus: [0.5, 1.0], samples: 256, airy: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrSpec {
    pub eps: Vec<f64>,
    pub family: IncrementFamily,
}

impl Default for ErrSpec {
    fn default() -> Self {
        Self { eps: vec![0.2, 0.1, 0.05], family: IncrementFamily::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitSpec {
    /// Γ in the blow-up frame, attached at the origin.
    pub increment: Chains,
    /// Defaults to the singular boundary coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[f64; 2]>,
    pub options: LimitOptions,
    /// Radii for the R-independence check; empty skips it.
    pub radii: Vec<f64>,
    /// Recompute F at twice the truncation radius.
    pub outer_doubling: bool,
    /// Load multipliers t for the κ ↦ tκ scaling table; empty skips it.
    pub load_scales: Vec<f64>,
}

impl Default for LimitSpec {
    fn default() -> Self {
        Self {
            increment: vec![vec![[0.0, 0.0], [1.0, 0.0]]],
            kappa: None,
            options: LimitOptions::default(),
            radii: Vec::new(),
            outer_doubling: false,
            load_scales: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSpec {
    pub interval: [f64; 2],
    pub convention: AngleConvention,
    pub rank_threshold: f64,
    pub root_tol: f64,
    /// Write the Airy mode audit for both conventions.
    pub audit: bool,
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        Self {
            interval: [0.4, 3.6],
            convention: AngleConvention::default(),
            rank_threshold: DEFAULT_RANK_THRESHOLD,
            root_tol: DEFAULT_ROOT_TOL,
            audit: true,
        }
    }
}

impl SpectrumSpec {
    pub fn options(&self) -> SpectrumOptions {
        SpectrumOptions { rank_threshold: self.rank_threshold, root_tol: self.root_tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Dotted path of the offending field.
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn error(field: &str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, field: field.into(), message: message.into() }
    }

    fn warning(field: &str, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, field: field.into(), message: message.into() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, String> {
        toml::from_str(s).map_err(|e| e.to_string())
    }

    pub fn from_json_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }

    /// Reads a scenario; `.json` files are JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        };
        parsed.map_err(|message| ConfigError::Parse { path: path.display().to_string(), message })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes to JSON")
    }

    /// Canonical bytes used for the config hash.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("scenario serializes to JSON")
    }

    pub fn material(&self) -> cracktip_core::Result<ElasticMaterial> {
        ElasticMaterial::new(self.material.lambda, self.material.mu)
    }

    pub fn crack(&self) -> cracktip_core::Result<CrackSet> {
        chains_to_crack(&self.crack.chains)
    }

    pub fn modes(&self) -> cracktip_core::Result<SingularModeSet> {
        Ok(SingularModeSet::validated(self.material()?))
    }

    pub fn boundary_data(&self) -> cracktip_core::Result<BoundaryData> {
        Ok(match &self.boundary {
            BoundarySpec::Zero => BoundaryData::zero(),
            BoundarySpec::Rigid { a, b, c } => BoundaryData::rigid(RigidMotion::new(*a, *b, *c)),
            BoundarySpec::Singular { kappa } => BoundaryData::singular(SingularDisplacement::new(self.modes()?, *kappa)),
            BoundarySpec::Table { samples } => {
                let rows = samples.clone();
                BoundaryData::new(move |x, hint| table_eval(&rows, x, hint))
            }
        })
    }

    /// κ of the limit problem: explicit, else the singular boundary data.
    pub fn limit_kappa(&self, spec: &LimitSpec) -> Option<[f64; 2]> {
        match (&spec.kappa, &self.boundary) {
            (Some(k), _) => Some(*k),
            (None, BoundarySpec::Singular { kappa }) => Some(*kappa),
            _ => None,
        }
    }

    /// Full constraint report; never runs a solver.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut d = Vec::new();
        let m = self.material;
        if !(m.lambda.is_finite() && m.lambda > 0.0) {
            d.push(Diagnostic::error("material.lambda", format!("must be positive and finite, got {}", m.lambda)));
        }
        if !(m.mu.is_finite() && m.mu > 0.0) {
            d.push(Diagnostic::error("material.mu", format!("must be positive and finite, got {}", m.mu)));
        }
        if let Err(e) = self.mesh.validate() {
            d.push(Diagnostic::error("mesh", e.to_string()));
        }
        let radius = self.mesh.radius;
        match self.crack().and_then(|c| c.validate_admissible().map(|_| c)) {
            Err(e) => d.push(Diagnostic::error("crack.chains", e.to_string())),
            Ok(c) if c.vertices().all(|p| p.norm() < radius) => {
                d.push(Diagnostic::warning("crack.chains", format!("crack does not reach the outer circle of radius {radius}")))
            }
            Ok(_) => {}
        }
        self.validate_boundary(&mut d);
        if let Some(a) = &self.airy {
            check_radii(&mut d, "airy.hessian_radii", &a.hessian_radii, 0.0, radius, true);
            check_radii(&mut d, "airy.decay_radii", &a.decay_radii, 0.0, radius, false);
            if let Some(r) = a.poincare_radius {
                if !(r > 0.0 && r < radius) {
                    d.push(Diagnostic::error("airy.poincare_radius", format!("must lie in (0, {radius}), got {r}")));
                }
            }
        }
        if let Some(b) = &self.blowup {
            let [a0, a1] = b.annulus;
            if !(a0 > 0.0 && a1 > a0 && a1 <= 1.0) {
                d.push(Diagnostic::error("blowup.annulus", format!("must satisfy 0 < r0 < r1 <= 1, got ({a0}, {a1})")));
            }
            if b.eps.is_empty() || b.eps.iter().any(|&e| !(e > 0.0 && e <= radius)) {
                d.push(Diagnostic::error("blowup.eps", format!("radii must lie in (0, {radius}]")));
            } else if b.eps.windows(2).any(|w| w[1] >= w[0]) {
                d.push(Diagnostic::error("blowup.eps", "radii must be strictly decreasing"));
            }
            if b.samples < cracktip_core::blowup::MIN_SAMPLES {
                d.push(Diagnostic::error(
                    "blowup.samples",
                    format!("need at least {} samples, got {}", cracktip_core::blowup::MIN_SAMPLES, b.samples),
                ));
            }
        }
        if let Some(e) = &self.err {
            if let Err(err) = e.family.validate() {
                d.push(Diagnostic::error("err.family", err.to_string()));
            }
            if e.eps.is_empty() || e.eps.iter().any(|&x| !(x > 0.0 && 2.0 * x < radius)) {
                d.push(Diagnostic::error("err.eps", format!("budgets must lie in (0, {})", radius / 2.0)));
            }
        }
        if let Some(l) = &self.limit {
            self.validate_limit(&mut d, l);
        }
        if let Some(s) = &self.spectrum {
            let [a, b] = s.interval;
            if !(a.is_finite() && b.is_finite() && a < b) {
                d.push(Diagnostic::error("spectrum.interval", format!("must satisfy a < b, got ({a}, {b})")));
            }
            if !(s.rank_threshold > 0.0 && s.rank_threshold < 1.0) {
                d.push(Diagnostic::error("spectrum.rank_threshold", "must lie in (0, 1)"));
            }
            if !(s.root_tol > 0.0) {
                d.push(Diagnostic::error("spectrum.root_tol", "must be positive"));
            }
        }
        d
    }

    fn validate_boundary(&self, d: &mut Vec<Diagnostic>) {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match &self.boundary {
            BoundarySpec::Zero => {}
            BoundarySpec::Rigid { a, b, c } => {
                if !finite(&[*a, *b, *c]) {
                    d.push(Diagnostic::error("boundary", "rigid motion must be finite"));
                }
            }
            BoundarySpec::Singular { kappa } => {
                if !finite(kappa) {
                    d.push(Diagnostic::error("boundary.kappa", "coefficients must be finite"));
                }
            }
            BoundarySpec::Table { samples } => {
                let ok = samples.len() >= 2
                    && samples.iter().all(|r| finite(r))
                    && samples.windows(2).all(|w| w[1][0] > w[0][0])
                    && samples[0][0] <= -PI
                    && samples[samples.len() - 1][0] >= PI;
                if !ok {
                    d.push(Diagnostic::error(
                        "boundary.samples",
                        "need finite rows [theta, ux, uy] with theta strictly increasing and covering [-pi, pi]",
                    ));
                }
            }
        }
    }

    fn validate_limit(&self, d: &mut Vec<Diagnostic>, l: &LimitSpec) {
        let o = &l.options;
        match chains_to_crack(&l.increment) {
            Err(e) => d.push(Diagnostic::error("limit.increment", e.to_string())),
            Ok(g) => {
                if g.vertices().any(|p| p.norm() >= o.radius) {
                    d.push(Diagnostic::error(
                        "limit.increment",
                        format!("increment must lie inside the open ball of radius {}", o.radius),
                    ));
                } else if !g.is_empty() && !g.union(&sigma0()).is_connected() {
                    d.push(Diagnostic::error("limit.increment", "increment is not connected to the crack tip"));
                }
                let reach = g.vertices().map(|p| p.norm()).fold(0.0, f64::max);
                if l.radii.iter().any(|&r| !(r > reach)) {
                    d.push(Diagnostic::error("limit.radii", format!("every radius must exceed the increment reach {reach}")));
                }
                if l.radii.windows(2).any(|w| w[1] <= w[0]) {
                    d.push(Diagnostic::error("limit.radii", "radii must be strictly increasing"));
                }
            }
        }
        if let Err(e) = o.validate() {
            d.push(Diagnostic::error("limit.options", e.to_string()));
        } else if o.outer_radius < 128.0 * o.radius {
            d.push(Diagnostic::warning(
                "limit.options.outer_radius",
                format!(
                    "truncation error of F is about 2.9*l/R_out relative; R_out = {} gives {:.1}% for a unit increment",
                    o.outer_radius,
                    290.0 / o.outer_radius
                ),
            ));
        }
        match self.limit_kappa(l) {
            None => d.push(Diagnostic::error("limit.kappa", "required unless the boundary data is singular")),
            Some(k) if !k.iter().all(|x| x.is_finite()) => d.push(Diagnostic::error("limit.kappa", "must be finite")),
            _ => {}
        }
        if l.load_scales.iter().any(|t| !t.is_finite()) {
            d.push(Diagnostic::error("limit.load_scales", "must be finite"));
        }
    }
}

pub fn has_errors(d: &[Diagnostic]) -> bool {
    d.iter().any(|x| x.severity == Severity::Error)
}

pub fn chains_to_crack(chains: &Chains) -> cracktip_core::Result<CrackSet> {
    CrackSet::new(chains.iter().map(|c| c.iter().map(|p| Vec2::new(p[0], p[1])).collect()).collect())
}

fn sigma0() -> CrackSet {
    CrackSet::segment(Vec2::zeros(), Vec2::new(-1.0, 0.0)).expect("unit segment")
}

fn check_radii(d: &mut Vec<Diagnostic>, field: &str, radii: &[f64], lo: f64, hi: f64, annuli: bool) {
    let need = if annuli { 2 } else { 1 };
    if radii.len() < need {
        d.push(Diagnostic::error(field, format!("need at least {need} radii")));
    } else if radii.iter().any(|&r| !(r >= lo && r <= hi)) {
        d.push(Diagnostic::error(field, format!("radii must lie in [{lo}, {hi}]")));
    } else if radii.windows(2).any(|w| w[1] <= w[0]) {
        d.push(Diagnostic::error(field, "radii must be strictly increasing"));
    } else if !annuli && radii[0] == 0.0 {
        d.push(Diagnostic::error(field, "radii must be positive"));
    }
}

fn table_eval(rows: &[[f64; 3]], x: Vec2, hint: Vec2) -> Vec2 {
    let t = AngleConvention::PlusMinusPi.angle(x, Side::from_direction(hint));
    let k = rows.partition_point(|r| r[0] <= t).clamp(1, rows.len() - 1);
    let (a, b) = (rows[k - 1], rows[k]);
    let s = ((t - a[0]) / (b[0] - a[0])).clamp(0.0, 1.0);
    Vec2::new(a[1] + s * (b[1] - a[1]), a[2] + s * (b[2] - a[2]))
}
