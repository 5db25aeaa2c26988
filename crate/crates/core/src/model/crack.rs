use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, rotate, segment_disk_interval, segment_length_in_disk, vec2, wrap_angle, Vec2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ROTATION_SCAN: usize = 4096;
const ROTATION_SPACING: f64 = 1.0 / 1024.0;

/// Union of polyline chains. Admissible cracks are connected and contain the
/// origin; the first vertex of the first chain is the tip.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct CrackSet {
    chains: Vec<Vec<Vec2>>,
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for CrackSet {
    type Error = Error;
    fn try_from(raw: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        Self::new(raw.into_iter().map(|c| c.into_iter().map(|p| vec2(p[0], p[1])).collect()).collect())
    }
}

impl From<CrackSet> for Vec<Vec<[f64; 2]>> {
    fn from(c: CrackSet) -> Self {
        c.chains.into_iter().map(|ch| ch.into_iter().map(|p| [p.x, p.y]).collect()).collect()
    }
}

impl CrackSet {
    /// Validates vertex data: finite coordinates, at least two vertices per
    /// chain, no repeated consecutive vertices.
    pub fn new(chains: Vec<Vec<Vec2>>) -> Result<Self> {
        for (i, chain) in chains.iter().enumerate() {
            if chain.len() < 2 {
                return Err(Error::DegenerateCrack(format!("chain {i} has fewer than two vertices")));
            }
            if chain.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
                return Err(Error::DegenerateCrack(format!("chain {i} has a non-finite vertex")));
            }
            if let Some(k) = chain.windows(2).position(|w| w[0] == w[1]) {
                return Err(Error::DegenerateCrack(format!("chain {i} repeats vertex {k}")));
            }
        }
        Ok(Self { chains })
    }

    pub fn empty() -> Self {
        Self { chains: Vec::new() }
    }

    pub fn polyline(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(vec![points.iter().map(|p| vec2(p[0], p[1])).collect()])
    }

    pub fn segment(a: Vec2, b: Vec2) -> Result<Self> {
        Self::new(vec![vec![a, b]])
    }

    pub fn chains(&self) -> &[Vec<Vec2>] {
        &self.chains
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        self.chains.iter().flat_map(|c| c.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.chains.iter().flatten().copied()
    }

    pub fn tip(&self) -> Option<Vec2> {
        self.chains.first().map(|c| c[0])
    }

    /// Sum of segment lengths.
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    fn scale(&self) -> f64 {
        self.vertices().map(|p| p.norm()).fold(1.0, f64::max)
    }

    pub fn contains_origin(&self) -> bool {
        let tol = 1e-12 * self.scale();
        self.segments().any(|(a, b)| point_segment_distance(Vec2::zeros(), a, b) <= tol)
    }

    /// Whether the union of segments is connected.
    pub fn is_connected(&self) -> bool {
        let segs: Vec<_> = self.segments().collect();
        if segs.is_empty() {
            return true;
        }
        let tol = 1e-12 * self.scale();
        let mut seen = vec![false; segs.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..segs.len() {
                if !seen[j] && segment_distance(segs[i], segs[j]) <= tol {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Chains through the origin, connected, with the tip at the origin.
    pub fn validate_admissible(&self) -> Result<()> {
        match self.tip() {
            None => Err(Error::DegenerateCrack("no chains".into())),
            Some(t) if t != Vec2::zeros() => Err(Error::DegenerateCrack("the first vertex must be the origin".into())),
            _ if !self.is_connected() => Err(Error::DegenerateCrack("chains are not connected".into())),
            _ => Ok(()),
        }
    }

    /// `H¹(Γ ∩ B_ρ) / 2ρ` by exact segment–disk clipping.
    pub fn density_ratio(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!("density radius must be positive, got {rho}")));
        }
        let l: f64 = self.segments().map(|(a, b)| segment_length_in_disk(a, b, rho)).sum();
        Ok(l / (2.0 * rho))
    }

    /// Part of the set inside the closed disk of radius `r`.
    pub fn clip_to_disk(&self, r: f64) -> CrackSet {
        let mut out: Vec<Vec<Vec2>> = Vec::new();
        for chain in &self.chains {
            let mut current: Vec<Vec2> = Vec::new();
            for w in chain.windows(2) {
                let (a, b) = (w[0], w[1]);
                match segment_disk_interval(a, b, r) {
                    Some((t0, t1)) => {
                        let p = if t0 == 0.0 { a } else { a + (b - a) * t0 };
                        let q = if t1 == 1.0 { b } else { a + (b - a) * t1 };
                        if p == q {
                            continue;
                        }
                        if current.last() != Some(&p) {
                            if current.len() >= 2 {
                                out.push(std::mem::take(&mut current));
                            }
                            current = vec![p];
                        }
                        current.push(q);
                    }
                    None => {
                        if current.len() >= 2 {
                            out.push(std::mem::take(&mut current));
                        }
                        current.clear();
                    }
                }
            }
            if current.len() >= 2 {
                out.push(current);
            }
        }
        CrackSet { chains: out }
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> CrackSet {
        CrackSet { chains: self.chains.iter().map(|c| c.iter().map(|&p| f(p)).collect()).collect() }
    }

    pub fn rotated(&self, angle: f64) -> CrackSet {
        self.map(|p| rotate(p, angle))
    }

    /// Clip to `B_eps`, then `x ↦ R_rot x / eps`.
    pub fn rescale(&self, eps: f64, rot: f64) -> Result<CrackSet> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("blow-up radius must be positive, got {eps}")));
        }
        Ok(self.clip_to_disk(eps).map(|p| rotate(p, rot) / eps))
    }

    pub fn union(&self, other: &CrackSet) -> CrackSet {
        let mut chains = self.chains.clone();
        chains.extend(other.chains.iter().cloned());
        CrackSet { chains }
    }

    /// Arc-length samples with spacing at most `spacing`, segment endpoints included.
    pub fn sample(&self, spacing: f64) -> Vec<Vec2> {
        let mut pts = Vec::new();
        for (a, b) in self.segments() {
            let n = ((b - a).norm() / spacing).ceil().max(1.0) as usize;
            for k in 0..=n {
                pts.push(a + (b - a) * (k as f64 / n as f64));
            }
        }
        pts
    }

    /// Hausdorff distance between arc-length samples with spacing `tol/4`.
    pub fn hausdorff(&self, other: &CrackSet, tol: f64) -> Result<f64> {
        hausdorff_distance(&self.sample(tol / 4.0), &other.sample(tol / 4.0))
    }

    /// Rotation angle in [0, 2π) aligning `ε⁻¹(Γ ∩ B_ε)` with Σ₀ = (−∞,0]×{0}
    /// inside the closed unit ball: 4096-point angular scan of the Hausdorff
    /// objective, then golden-section refinement.
    pub fn blowup_rotation(&self, eps: f64) -> Result<f64> {
        let (theta, _) = self.blowup_rotation_with_misfit(eps)?;
        Ok(theta)
    }

    /// Like [`Self::blowup_rotation`], also returning the attained objective.
    pub fn blowup_rotation_with_misfit(&self, eps: f64) -> Result<(f64, f64)> {
        let s = self.rescale(eps, 0.0)?;
        if s.length() == 0.0 {
            return Err(Error::CrackMissesBall(eps));
        }
        let objective = AlignmentObjective::new(&s);
        let step = 2.0 * PI / ROTATION_SCAN as f64;
        let mut best = (0.0, f64::INFINITY);
        for k in 0..ROTATION_SCAN {
            let t = k as f64 * step;
            let j = objective.eval(t);
            if j < best.1 {
                best = (t, j);
            }
        }
        let (t, j) = golden_section(|t| objective.eval(t), best.0 - step, best.0 + step, 1e-12);
        if j <= best.1 {
            Ok((wrap_angle(t), j))
        } else {
            Ok((wrap_angle(best.0), best.1))
        }
    }
}

fn segment_distance(s: (Vec2, Vec2), t: (Vec2, Vec2)) -> f64 {
    let o = |a: Vec2, b: Vec2, c: Vec2| crate::geometry::cross(b - a, c - a);
    let (a, b) = s;
    let (c, d) = t;
    let (d1, d2, d3, d4) = (o(a, b, c), o(a, b, d), o(c, d, a), o(c, d, b));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Hausdorff objective between the rotated set and Σ₀ ∩ B̄₁.
struct AlignmentObjective {
    samples: Vec<Vec2>,
    segments: Vec<(Vec2, Vec2)>,
    target: Vec<Vec2>,
}

impl AlignmentObjective {
    fn new(s: &CrackSet) -> Self {
        let target_set = CrackSet::segment(vec2(0.0, 0.0), vec2(-1.0, 0.0)).expect("valid segment");
        Self {
            samples: s.sample(ROTATION_SPACING),
            segments: s.segments().collect(),
            target: target_set.sample(ROTATION_SPACING),
        }
    }

    fn eval(&self, theta: f64) -> f64 {
        let (sn, cs) = theta.sin_cos();
        let mut d: f64 = 0.0;
        // distance to Σ₀ ∩ B̄₁ in closed form
        for p in &self.samples {
            let q = vec2(cs * p.x - sn * p.y, sn * p.x + cs * p.y);
            let dx = if q.x > 0.0 { q.x } else if q.x < -1.0 { -1.0 - q.x } else { 0.0 };
            d = d.max((dx * dx + q.y * q.y).sqrt());
        }
        for t in &self.target {
            // rotate the target backwards instead of the set forwards
            let q = vec2(cs * t.x + sn * t.y, -sn * t.x + cs * t.y);
            let m = self.segments.iter().map(|&(a, b)| point_segment_distance(q, a, b)).fold(f64::INFINITY, f64::min);
            d = d.max(m);
        }
        d
    }
}

/// Minimum of a unimodal function on [a, b].
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Symmetric max–min distance between two finite point clouds.
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |x: &[Vec2], y: &[Vec2]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm_squared()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
            .sqrt()
    };
    Ok(directed(a, b).max(directed(b, a)))
}
