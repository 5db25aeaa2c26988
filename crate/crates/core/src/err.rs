//! Energy release rates: `G(Γ)` for crack increments, the scaled infimum
//! over a parametric increment family, and the limit functional `F(Γ)`.

use crate::error::{Error, Result};
use crate::fem::{
    solve_dirichlet, solve_with_load, triangulate, BoundaryData, CrackMesh, Discretization, DisplacementField,
    ElementOrder, MeshParams, OuterCondition, SolveStats,
};
use crate::geometry::{rotate, triangle_disk_area, vec2, Vec2};
use crate::model::{golden_section, CrackSet, ElasticMaterial};
use crate::quadrature::{collapsed_triangle_rule, gauss_legendre_interval};
use crate::singular::{SingularDisplacement, SingularModeSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

/// Vertices per half circle of the circle competitor.
const CIRCLE_ARC_POINTS: usize = 64;

/// Unit direction continuing the chain that ends at the tip.
fn tip_frame(base: &CrackSet) -> Result<(Vec2, Vec2)> {
    base.validate_admissible()?;
    let c = &base.chains()[0];
    let d = c[0] - c[1];
    Ok((c[0], d / d.norm()))
}

/// One member of an increment family. Angles are measured from the collinear
/// extension of the terminal crack segment, counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Candidate {
    Straight { angle: f64 },
    Kink { first: f64, second: f64, split: f64 },
    Circle { radius: f64 },
}

impl Candidate {
    /// Primary parameter for tables: the angle, the first kink angle, or the
    /// circle radius.
    pub fn param(&self) -> f64 {
        match *self {
            Candidate::Straight { angle } => angle,
            Candidate::Kink { first, .. } => first,
            Candidate::Circle { radius } => radius,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Candidate::Straight { .. } => "straight",
            Candidate::Kink { .. } => "kink",
            Candidate::Circle { .. } => "circle",
        }
    }

    /// The increment of total length `eps` attached at the tip of `base`.
    pub fn increment(&self, base: &CrackSet, eps: f64) -> Result<CrackSet> {
        let (tip, dir) = tip_frame(base)?;
        let at = |a: f64| rotate(dir, a);
        let check = |a: f64| {
            if a.abs() < PI {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("increment angle {a} folds onto the crack")))
            }
        };
        match *self {
            Candidate::Straight { angle } => {
                check(angle)?;
                CrackSet::segment(tip, tip + at(angle) * eps)
            }
            Candidate::Kink { first, second, split } => {
                check(first)?;
                check(second)?;
                if !(split > 0.0 && split < 1.0) {
                    return Err(Error::InvalidArgument(format!("kink split {split} outside (0, 1)")));
                }
                let p = tip + at(first) * (split * eps);
                CrackSet::new(vec![vec![tip, p, p + at(second) * ((1.0 - split) * eps)]])
            }
            Candidate::Circle { radius } => {
                let p = tip + dir * radius;
                let phi0 = dir.y.atan2(dir.x);
                let arc = |from: f64| -> Vec<Vec2> {
                    (0..=CIRCLE_ARC_POINTS)
                        .map(|k| {
                            let t = from + PI * k as f64 / CIRCLE_ARC_POINTS as f64;
                            tip + vec2(t.cos(), t.sin()) * radius
                        })
                        .collect()
                };
                let mut upper = arc(phi0);
                let mut lower = arc(phi0 + PI);
                // close the loop exactly
                *upper.first_mut().unwrap() = p;
                *lower.last_mut().unwrap() = p;
                CrackSet::new(vec![vec![tip, p], upper, lower])
            }
        }
    }
}

/// Increment candidates for the scaled infimum; every member has length at
/// most the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IncrementFamily {
    /// Straight-segment angles.
    pub angles: Vec<f64>,
    /// Golden-section refinement around the best straight angle.
    pub refine: bool,
    /// Kink angle pairs `(first, second)`.
    pub kinks: Vec<(f64, f64)>,
    /// Length fraction of the first kink segment.
    pub kink_split: f64,
    pub circle: bool,
}

impl Default for IncrementFamily {
    fn default() -> Self {
        Self {
            angles: (-4..=4).map(|k| k as f64 * PI / 12.0).collect(),
            refine: true,
            kinks: Vec::new(),
            kink_split: 0.5,
            circle: true,
        }
    }
}

impl IncrementFamily {
    /// Straight segments only.
    pub fn straight(angles: Vec<f64>) -> Self {
        Self { angles, refine: false, kinks: Vec::new(), kink_split: 0.5, circle: false }
    }

    pub fn candidates(&self, eps: f64) -> Vec<Candidate> {
        let mut out: Vec<Candidate> = self.angles.iter().map(|&angle| Candidate::Straight { angle }).collect();
        out.extend(
            self.kinks.iter().map(|&(first, second)| Candidate::Kink { first, second, split: self.kink_split }),
        );
        if self.circle {
            out.push(Candidate::Circle { radius: circle_radius(eps) });
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.angles.iter().chain(self.kinks.iter().flat_map(|k| [&k.0, &k.1])).any(|a| !(a.abs() < PI)) {
            return Err(Error::InvalidArgument("increment angles must lie in (−π, π)".into()));
        }
        if !self.kinks.is_empty() && !(self.kink_split > 0.0 && self.kink_split < 1.0) {
            return Err(Error::InvalidArgument(format!("kink split {} outside (0, 1)", self.kink_split)));
        }
        if self.angles.is_empty() && self.kinks.is_empty() && !self.circle {
            return Err(Error::InvalidArgument("empty increment family".into()));
        }
        Ok(())
    }
}

/// Radius `ε/(2π+1)` of the circle competitor, whose total length is `ε`.
pub fn circle_radius(eps: f64) -> f64 {
    eps / (2.0 * PI + 1.0)
}

/// `G(Γ) = E(u_Γ) − E(u₀)`: both displacements minimize the elastic energy
/// on one triangulation of the base crack and the increment, with the
/// increment edges closed for `u₀`.
pub fn compute_g(
    base: &CrackSet,
    increment: &CrackSet,
    params: &MeshParams,
    mat: &ElasticMaterial,
    bd: &BoundaryData,
) -> Result<f64> {
    if increment.length() == 0.0 {
        return Ok(0.0);
    }
    if !base.union(increment).is_connected() {
        return Err(Error::DisconnectedIncrement);
    }
    let geom = triangulate(params, &[base, increment])?;
    let energy = |open_increment: bool| -> Result<f64> {
        let mesh = CrackMesh::open(&geom, |label| label == 0 || open_increment)?;
        let disc = Discretization::new(mesh);
        Ok(solve_dirichlet(&disc, mat, bd)?.elastic_energy(mat))
    };
    let (e0, e1) = rayon::join(|| energy(false), || energy(true));
    Ok(e1? - e0?)
}

/// `−(1/ε)·½∫_{B_ρ} Ce(u₀):e(u₀)` with `ρ = ε/(2π+1)`, by exact clipping of
/// the elements to the disk.
pub fn circle_competitor_bound(u0: &DisplacementField, mat: &ElasticMaterial, eps: f64) -> f64 {
    let m = &u0.disc.mesh;
    let rho = circle_radius(eps);
    let s = u0.stress_recovery(mat);
    let mut energy = 0.0;
    for (t, tri) in m.triangles.iter().enumerate() {
        let [a, b, c] = tri.map(|i| m.vertices[i]);
        let area = triangle_disk_area(a, b, c, rho);
        if area > 0.0 {
            energy += 0.5 * area * s.values[t].ddot(&mat.inverse_hooke(s.values[t]));
        }
    }
    -energy / eps
}

/// `G(Γ)` of one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateResult {
    pub candidate: Candidate,
    pub g: f64,
    pub g_over_eps: f64,
}

/// Scaled infimum over an increment family at one budget `ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrResult {
    pub eps: f64,
    /// `min G(Γ)/ε` over all evaluated candidates.
    pub g_eps: f64,
    pub minimizer: Candidate,
    /// Grid candidates first, then golden-section refinements.
    pub candidates: Vec<CandidateResult>,
    pub circle_bound: f64,
}

/// Best entry; ties go to the smaller candidate parameter.
fn best(rows: &[CandidateResult]) -> Option<CandidateResult> {
    rows.iter()
        .copied()
        .min_by(|a, b| a.g.total_cmp(&b.g).then(a.candidate.param().total_cmp(&b.candidate.param())))
}

/// Evaluates every candidate of `family` at budget `eps`, then refines the
/// best straight angle by golden section within one grid step.
pub fn g_eps(
    base: &CrackSet,
    family: &IncrementFamily,
    eps: f64,
    params: &MeshParams,
    mat: &ElasticMaterial,
    bd: &BoundaryData,
) -> Result<ErrResult> {
    family.validate()?;
    if !(eps > 0.0 && 2.0 * eps < params.radius) {
        return Err(Error::InvalidArgument(format!("budget {eps} does not fit twice inside the mesh radius")));
    }
    let eval = |c: Candidate| -> Result<CandidateResult> {
        let g = compute_g(base, &c.increment(base, eps)?, params, mat, bd)?;
        Ok(CandidateResult { candidate: c, g, g_over_eps: g / eps })
    };
    let base_disc = Discretization::new(CrackMesh::open(&triangulate(params, &[base])?, |_| true)?);
    let u0 = solve_dirichlet(&base_disc, mat, bd)?;
    let circle_bound = circle_competitor_bound(&u0, mat, eps);

    let mut rows = family.candidates(eps).into_par_iter().map(eval).collect::<Result<Vec<_>>>()?;
    let mut angles = family.angles.clone();
    angles.sort_by(f64::total_cmp);
    let best_straight = best(&rows.iter().filter(|r| r.candidate.name() == "straight").copied().collect::<Vec<_>>());
    if let (true, Some(b)) = (family.refine && angles.len() >= 2, best_straight) {
        let a = b.candidate.param();
        let k = angles.iter().position(|&x| x == a).unwrap();
        let lo = if k > 0 { angles[k - 1] } else { a };
        let hi = angles.get(k + 1).copied().unwrap_or(a);
        let step = angles.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let extra = Mutex::new(Vec::new());
        let failure = Mutex::new(None);
        golden_section(
            |t| match eval(Candidate::Straight { angle: t }) {
                Ok(r) => {
                    extra.lock().unwrap().push(r);
                    r.g
                }
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            step / 8.0,
        );
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e);
        }
        rows.extend(extra.into_inner().unwrap());
    }
    let min = best(&rows).ok_or_else(|| Error::InvalidArgument("empty increment family".into()))?;
    Ok(ErrResult { eps, g_eps: min.g_over_eps, minimizer: min.candidate, candidates: rows, circle_bound })
}

/// Discretization of the limit problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitOptions {
    /// `R` with `Γ ⊂ B_R`.
    pub radius: f64,
    /// Truncation radius `R_out ≥ 8R` with a traction-free outer boundary.
    /// The truncation error decays like `ℓ/R_out` for an increment of size `ℓ`.
    pub outer_radius: f64,
    /// Element size at unit distance from the tip.
    pub h: f64,
    pub grading: f64,
    pub order: ElementOrder,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { radius: 2.0, outer_radius: 256.0, h: 0.05, grading: 0.5, order: ElementOrder::P1 }
    }
}

impl LimitOptions {
    /// Self-similar mesh of `B_{R_out}` grading toward the tip inside `B_R`
    /// and coarsening linearly outside it, with a ring of nodes on `∂B_R`.
    pub fn mesh_params(&self) -> MeshParams {
        let p = (1.0 / self.grading).log2();
        let h = self.h * self.radius.powf(p);
        MeshParams {
            radius: self.outer_radius,
            h,
            grading: self.grading,
            grading_radius: Some(self.radius),
            order: self.order,
            forced_rings: vec![self.radius],
            growth_radius: Some(self.radius),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("limit radius {} must be positive", self.radius)));
        }
        if !(self.outer_radius >= 8.0 * self.radius) {
            return Err(Error::InvalidArgument(format!(
                "truncation radius {} is below 8R = {}",
                self.outer_radius,
                8.0 * self.radius
            )));
        }
        self.mesh_params().validate()
    }
}

/// Minimum of the limit functional and the discrete minimizer's size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitResult {
    pub value: f64,
    pub stats: SolveStats,
}

/// `F(Γ) = min_w ½∫Ce(w):e(w) + ∫_{B_R}Ce(u):e(w) − ∫_{∂B_R}(Ce(u)ν)·w` over
/// `B_{R_out} ∖ (Σ₀ ∪ Γ)`, with `u` the analytic singular field of `kappa`.
/// `B_R` is the union of elements inside the node ring on `∂B_R`; the
/// functional is unchanged by that choice since `u` is an equilibrated,
/// traction-free field.
pub fn limit_functional(
    increment: &CrackSet,
    kappa: [f64; 2],
    opts: &LimitOptions,
    mat: &ElasticMaterial,
) -> Result<LimitResult> {
    opts.validate()?;
    let r = opts.radius;
    if increment.vertices().any(|p| p.norm() >= r * (1.0 - 1e-9)) {
        return Err(Error::IncrementTouchesBoundary(r));
    }
    let sigma0 = CrackSet::segment(Vec2::zeros(), vec2(-opts.outer_radius, 0.0))?;
    if !increment.is_empty() && !sigma0.union(increment).is_connected() {
        return Err(Error::DisconnectedIncrement);
    }
    let geom = triangulate(&opts.mesh_params(), &[&sigma0, increment])?;
    let disc = Discretization::new(CrackMesh::open(&geom, |_| true)?);
    let sd = SingularDisplacement::new(SingularModeSet::validated(*mat), kappa);
    let load = limit_load(&disc, &sd, r);
    let (w, stats) = solve_with_load(&disc, mat, &OuterCondition::Natural, Some(&load))?;
    let work: f64 = w.values.iter().enumerate().map(|(i, v)| load[2 * i] * v.x + load[2 * i + 1] * v.y).sum();
    Ok(LimitResult { value: -0.5 * work, stats })
}

/// Load vector `ℓ(φ) = −∫_P σ:e(φ) + ∫_{∂P}(σν)·φ` for the element union `P`.
fn limit_load(disc: &Discretization, sd: &SingularDisplacement, r: f64) -> Vec<f64> {
    let m = &disc.mesh;
    let s = &disc.space;
    let mut load = vec![0.0; 2 * s.num_nodes()];
    let inside: Vec<bool> =
        m.triangles.iter().map(|t| t.iter().all(|&i| m.vertices[i].norm() <= r * (1.0 + 1e-9))).collect();
    for (t, tri) in m.triangles.iter().enumerate() {
        if !inside[t] {
            continue;
        }
        let v = tri.map(|i| m.vertices[i]);
        // apex at the vertex nearest the singularity
        let k = (0..3).min_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
        let simplex = disc.simplex(t);
        for (x, wq) in collapsed_triangle_rule(v[k], v[(k + 1) % 3], v[(k + 2) % 3], 5) {
            let sig = sd.stress(x);
            let (_, grads) = disc.shape_at(t, simplex.barycentric(x));
            for (j, g) in grads.iter().enumerate() {
                let node = s.elements[t][j];
                // σ:e(φ) for φ = g-gradient hat function along each axis
                load[2 * node] -= wq * (sig.xx * g.x + sig.xy * g.y);
                load[2 * node + 1] -= wq * (sig.xy * g.x + sig.yy * g.y);
            }
        }
    }
    let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (t, tri) in m.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edges.entry((a.min(b), a.max(b))).or_default().push((t, k));
        }
    }
    let mut keys: Vec<_> = edges.keys().copied().collect();
    keys.sort_unstable();
    let gauss = gauss_legendre_interval(4, 0.0, 1.0);
    for key in keys {
        let adj = &edges[&key];
        if adj.len() != 2 || inside[adj[0].0] == inside[adj[1].0] {
            continue;
        }
        let (t, k) = if inside[adj[0].0] { adj[0] } else { adj[1] };
        let tri = m.triangles[t];
        let (a, b) = (m.vertices[tri[k]], m.vertices[tri[(k + 1) % 3]]);
        let d = b - a;
        let nu = vec2(d.y, -d.x) / d.norm();
        let simplex = disc.simplex(t);
        for &(p, wq) in &gauss {
            let x = a + d * p;
            let traction = sd.stress(x).mul_vec(nu);
            let (vals, _) = disc.shape_at(t, simplex.barycentric(x));
            for (j, phi) in vals.iter().enumerate() {
                let node = s.elements[t][j];
                load[2 * node] += wq * d.norm() * phi * traction.x;
                load[2 * node + 1] += wq * d.norm() * phi * traction.y;
            }
        }
    }
    load
}

/// Values of `F` over several radii and their largest relative difference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RIndependence {
    pub values: Vec<(f64, f64)>,
    pub spread: f64,
}

/// Recomputes `F` for every radius on one truncation radius, the larger of
/// `opts.outer_radius` and `8·max R`.
pub fn r_independence_check(
    increment: &CrackSet,
    kappa: [f64; 2],
    radii: &[f64],
    opts: &LimitOptions,
    mat: &ElasticMaterial,
) -> Result<RIndependence> {
    let outer = radii.iter().fold(opts.outer_radius, |o, &r| o.max(8.0 * r));
    let values = radii
        .par_iter()
        .map(|&r| {
            let o = LimitOptions { radius: r, outer_radius: outer, ..opts.clone() };
            limit_functional(increment, kappa, &o, mat).map(|f| (r, f.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let scale = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let spread = if scale == 0.0 { 0.0 } else { (max - min) / scale };
    Ok(RIndependence { values, spread })
}
