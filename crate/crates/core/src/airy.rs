//! Harmonic conjugate and Airy function of a computed stress field, recovered
//! by least-squares potential solves on the cracked mesh.

use crate::error::{Error, Result};
use crate::fem::{Discretization, SpdMatrix, StressField};
use crate::geometry::{vec2, Vec2};
use crate::model::SymTensor2;
use crate::quadrature::gauss_legendre_interval;
use nalgebra::{SMatrix, SVector};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Scalar P1 field on the vertices of an opened mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub disc: Arc<Discretization>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(disc: &Arc<Discretization>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), disc.mesh.num_nodes());
        Self { disc: disc.clone(), values }
    }

    pub fn interpolate(disc: &Arc<Discretization>, f: impl Fn(Vec2, Vec2) -> f64) -> Self {
        let m = &disc.mesh;
        Self::new(disc, (0..m.num_nodes()).map(|i| f(m.vertices[i], m.hint[i])).collect())
    }

    pub fn gradient_in(&self, t: usize) -> Vec2 {
        let s = self.disc.simplex(t);
        let tri = self.disc.mesh.triangles[t];
        (0..3).map(|k| s.grad[k] * self.values[tri[k]]).sum()
    }

    pub fn eval_in(&self, t: usize, l: [f64; 3]) -> f64 {
        let tri = self.disc.mesh.triangles[t];
        (0..3).map(|k| l[k] * self.values[tri[k]]).sum()
    }

    pub fn eval(&self, x: Vec2, hint: Vec2) -> Result<f64> {
        let (t, l) = self.disc.locate(x, hint)?;
        Ok(self.eval_in(t, l))
    }

    pub fn add_affine(&self, c: f64, g: Vec2) -> Self {
        let m = &self.disc.mesh;
        Self::new(&self.disc, self.values.iter().zip(&m.vertices).map(|(v, x)| v + c + g.dot(x)).collect())
    }
}

/// Nodes pinned to zero: the tip, and the smallest node of every component
/// that does not contain it.
fn gauge_nodes(disc: &Discretization) -> Vec<usize> {
    let (n, comp) = disc.mesh.components();
    let tip = disc.mesh.tip_index;
    let mut pins = vec![usize::MAX; n];
    pins[comp[tip]] = tip;
    for (i, &c) in comp.iter().enumerate() {
        if pins[c] == usize::MAX {
            pins[c] = i;
        }
    }
    pins
}

/// Minimizes `Σ_T |T| |∇p − g_T|²` over P1 fields for each target, with the
/// gauge nodes fixed at zero.
fn potential_solve(disc: &Discretization, targets: &[Vec<Vec2>]) -> Result<Vec<Vec<f64>>> {
    let m = &disc.mesh;
    let n = m.num_nodes();
    let mut index = vec![0usize; n];
    let pins = gauge_nodes(disc);
    let mut next = 0;
    for i in 0..n {
        if pins.contains(&i) {
            index[i] = usize::MAX;
        } else {
            index[i] = next;
            next += 1;
        }
    }
    let mut a = SpdMatrix::new(next);
    let mut rhs = vec![vec![0.0; next]; targets.len()];
    for (t, tri) in m.triangles.iter().enumerate() {
        let s = disc.simplex(t);
        for i in 0..3 {
            let gi = index[tri[i]];
            if gi == usize::MAX {
                continue;
            }
            for (r, g) in rhs.iter_mut().zip(targets) {
                r[gi] += s.area * g[t].dot(&s.grad[i]);
            }
            for j in 0..3 {
                let gj = index[tri[j]];
                if gj != usize::MAX && gj <= gi {
                    a.add(gi, gj, s.area * s.grad[i].dot(&s.grad[j]));
                }
            }
        }
    }
    let sol = a.solve(&rhs)?;
    Ok(sol
        .into_iter()
        .map(|x| (0..n).map(|i| if index[i] == usize::MAX { 0.0 } else { x[index[i]] }).collect())
        .collect())
}

/// `v₀` with `∇v₀ = σ^⊥`: rows `(−σ₁₂, σ₁₁)` and `(−σ₂₂, σ₁₂)`.
pub fn reconstruct_conjugate(stress: &StressField) -> Result<Vec<Vec2>> {
    let g1: Vec<Vec2> = stress.values.iter().map(|s| vec2(-s.xy, s.xx)).collect();
    let g2: Vec<Vec2> = stress.values.iter().map(|s| vec2(-s.yy, s.xy)).collect();
    let p = potential_solve(&stress.disc, &[g1, g2])?;
    Ok(p[0].iter().zip(&p[1]).map(|(a, b)| vec2(*a, *b)).collect())
}

/// Relative L² misfit `‖∇v₀ − σ^⊥‖ / ‖σ‖`.
pub fn conjugate_misfit(stress: &StressField, v0: &[Vec2]) -> f64 {
    let m = &stress.disc.mesh;
    let (mut num, mut den) = (0.0, 0.0);
    for (t, tri) in m.triangles.iter().enumerate() {
        let s = stress.disc.simplex(t);
        let g1: Vec2 = (0..3).map(|k| s.grad[k] * v0[tri[k]].x).sum();
        let g2: Vec2 = (0..3).map(|k| s.grad[k] * v0[tri[k]].y).sum();
        let sg = &stress.values[t];
        num += s.area * ((g1 - vec2(-sg.xy, sg.xx)).norm_squared() + (g2 - vec2(-sg.yy, sg.xy)).norm_squared());
        den += s.area * sg.norm_squared();
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

/// `p⁽¹⁾`, `p⁽²⁾` with `∇p⁽¹⁾ = (σ₂₂, −σ₁₂)` and `∇p⁽²⁾ = (−σ₁₂, σ₁₁)`.
pub fn reconstruct_gradient_potentials(stress: &StressField) -> Result<(ScalarField, ScalarField)> {
    let g1: Vec<Vec2> = stress.values.iter().map(|s| vec2(s.yy, -s.xy)).collect();
    let g2: Vec<Vec2> = stress.values.iter().map(|s| vec2(-s.xy, s.xx)).collect();
    let mut p = potential_solve(&stress.disc, &[g1, g2])?;
    let p2 = p.pop().unwrap();
    let p1 = p.pop().unwrap();
    Ok((ScalarField::new(&stress.disc, p1), ScalarField::new(&stress.disc, p2)))
}

/// `w₀` with `∇w₀ ≈ (p⁽¹⁾, p⁽²⁾)`, `w₀(tip) = 0` and `∇w₀(tip) = 0`. The element target is the
/// constant vector best matching the trapezoidal edge integrals of `(p⁽¹⁾,
/// p⁽²⁾)`; the largest element circulation of those integrals is returned as
/// the loop residual.
pub fn reconstruct_airy(p1: &ScalarField, p2: &ScalarField) -> Result<(ScalarField, f64)> {
    let disc = &p1.disc;
    let m = &disc.mesh;
    // input potentials are re-gauged so that shifting them leaves w₀ unchanged
    let (_, comp) = m.components();
    let pins = gauge_nodes(disc);
    let regauge = |p: &ScalarField| -> Vec<f64> {
        p.values.iter().zip(&comp).map(|(v, &c)| v - p.values[pins[c]]).collect()
    };
    let (q1, q2) = (regauge(p1), regauge(p2));
    let mut loop_residual = 0.0f64;
    let targets: Vec<Vec2> = m
        .triangles
        .iter()
        .map(|tri| {
            let mut ata = SMatrix::<f64, 2, 2>::zeros();
            let mut atb = SVector::<f64, 2>::zeros();
            let mut circ = 0.0;
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let d = m.vertices[b] - m.vertices[a];
                let p = vec2(q1[a] + q1[b], q2[a] + q2[b]) * 0.5;
                let c = p.dot(&d);
                circ += c;
                ata += d * d.transpose();
                atb += d * c;
            }
            loop_residual = loop_residual.max(circ.abs());
            ata.cholesky().map(|ch| ch.solve(&atb)).unwrap_or_else(Vec2::zeros)
        })
        .collect();
    let w = potential_solve(disc, &[targets])?.pop().unwrap();
    Ok((ScalarField::new(disc, w), loop_residual))
}

/// Dual potentials of a stress field.
#[derive(Debug, Clone)]
pub struct PotentialPair {
    pub p1: ScalarField,
    pub p2: ScalarField,
    pub v0: Vec<Vec2>,
    pub w0: ScalarField,
    pub loop_residual: f64,
}

impl PotentialPair {
    pub fn from_stress(stress: &StressField) -> Result<Self> {
        let v0 = reconstruct_conjugate(stress)?;
        let (p1, p2) = reconstruct_gradient_potentials(stress)?;
        let (w0, loop_residual) = reconstruct_airy(&p1, &p2)?;
        Ok(Self { p1, p2, v0, w0, loop_residual })
    }
}

fn vertex_neighbours(disc: &Discretization) -> Vec<Vec<usize>> {
    let m = &disc.mesh;
    let mut adj = vec![Vec::new(); m.num_nodes()];
    for t in &m.triangles {
        for k in 0..3 {
            adj[t[k]].push(t[(k + 1) % 3]);
            adj[t[k]].push(t[(k + 2) % 3]);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Element Hessians by quadratic least-squares fits over vertex patches
/// (one ring, or two when the ring has fewer than eight vertices), averaged
/// over the element's vertices. Exact for quadratic nodal data.
pub fn recover_hessian(w: &ScalarField) -> Vec<SymTensor2> {
    let m = &w.disc.mesh;
    let adj = vertex_neighbours(&w.disc);
    let nodal: Vec<SymTensor2> = (0..m.num_nodes())
        .map(|i| {
            let mut patch = adj[i].clone();
            if patch.len() < 8 {
                let ring2: Vec<usize> = patch.iter().flat_map(|&j| adj[j].iter().copied()).collect();
                patch.extend(ring2);
                patch.sort_unstable();
                patch.dedup();
            }
            patch.retain(|&j| j != i);
            let x0 = m.vertices[i];
            let scale = patch.iter().map(|&j| (m.vertices[j] - x0).norm()).fold(0.0, f64::max);
            if scale == 0.0 {
                return SymTensor2::ZERO;
            }
            let mut ata = SMatrix::<f64, 6, 6>::zeros();
            let mut atb = SVector::<f64, 6>::zeros();
            for &j in patch.iter().chain(std::iter::once(&i)) {
                let d = (m.vertices[j] - x0) / scale;
                let row = SVector::<f64, 6>::from([1.0, d.x, d.y, d.x * d.x, d.x * d.y, d.y * d.y]);
                ata += row * row.transpose();
                atb += row * w.values[j];
            }
            match ata.svd(true, true).solve(&atb, 1e-12) {
                Ok(c) => SymTensor2::new(2.0 * c[3], c[4], 2.0 * c[5]) * (1.0 / (scale * scale)),
                Err(_) => SymTensor2::ZERO,
            }
        })
        .collect();
    m.triangles.iter().map(|t| (nodal[t[0]] + nodal[t[1]] + nodal[t[2]]) * (1.0 / 3.0)).collect()
}

/// L² misfit of `D²w₀` against `σ^⊥ = (σ₂₂, −σ₁₂; −σ₁₂, σ₁₁)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianMisfit {
    pub absolute: f64,
    /// Relative to `‖σ‖_{L²}`.
    pub relative: f64,
    /// `(r_in, r_out, relative misfit)` over annuli of element centroids.
    pub annuli: Vec<(f64, f64, f64)>,
}

pub fn verify_hessian(w0: &ScalarField, stress: &StressField, radii: &[f64]) -> HessianMisfit {
    let m = &w0.disc.mesh;
    let h = recover_hessian(w0);
    let mut bins = vec![(0.0, 0.0); radii.len().saturating_sub(1)];
    let (mut num, mut den) = (0.0, 0.0);
    for t in 0..m.triangles.len() {
        let a = m.area(t);
        let e = (h[t] - stress.values[t].airy_rotated()).norm_squared() * a;
        let s = stress.values[t].norm_squared() * a;
        num += e;
        den += s;
        let r = m.centroid(t).norm();
        for (k, b) in bins.iter_mut().enumerate() {
            if r >= radii[k] && r < radii[k + 1] {
                b.0 += e;
                b.1 += s;
            }
        }
    }
    let rel = |n: f64, d: f64| if d == 0.0 { 0.0 } else { (n / d).sqrt() };
    HessianMisfit {
        absolute: num.sqrt(),
        relative: rel(num, den),
        annuli: bins.iter().enumerate().map(|(k, b)| (radii[k], radii[k + 1], rel(b.0, b.1))).collect(),
    }
}

/// Crack-face traces of `w₀` and `∇w₀` against bulk references.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceNorms {
    /// `(∫_Γ± w²)^{1/2}` over both faces.
    pub value_norm: f64,
    /// `(∫_Γ± |∇w|²)^{1/2}` with the gradient of the adjacent element.
    pub gradient_norm: f64,
    /// `(∫_A w² / (R/2))^{1/2}` over the annulus `A = {R/2 < r < R}`.
    pub bulk_value_norm: f64,
    pub bulk_gradient_norm: f64,
}

pub fn crack_trace_norms(w0: &ScalarField) -> TraceNorms {
    let m = &w0.disc.mesh;
    let gauss = gauss_legendre_interval(3, 0.0, 1.0);
    let (mut v, mut g) = (0.0, 0.0);
    for f in &m.crack_faces {
        let (a, b) = (f.nodes[0], f.nodes[1]);
        let len = (m.vertices[b] - m.vertices[a]).norm();
        for &(s, wq) in &gauss {
            let val = (1.0 - s) * w0.values[a] + s * w0.values[b];
            v += wq * len * val * val;
        }
        g += len * w0.gradient_in(f.triangle).norm_squared();
    }
    let r = m.radius;
    let (mut bv, mut bg) = (0.0, 0.0);
    for t in 0..m.triangles.len() {
        let c = m.centroid(t).norm();
        if c > 0.5 * r && c < r {
            let a = m.area(t);
            let tri = m.triangles[t];
            // edge-midpoint rule, exact for quadratics
            let mid: f64 = (0..3)
                .map(|k| {
                    let x = 0.5 * (w0.values[tri[k]] + w0.values[tri[(k + 1) % 3]]);
                    x * x
                })
                .sum::<f64>()
                / 3.0;
            bv += a * mid;
            bg += a * w0.gradient_in(t).norm_squared();
        }
    }
    TraceNorms {
        value_norm: v.sqrt(),
        gradient_norm: g.sqrt(),
        bulk_value_norm: (bv / (0.5 * r)).sqrt(),
        bulk_gradient_norm: (bg / (0.5 * r)).sqrt(),
    }
}

/// `(ρ, ∫_{B_ρ}|σ|² / ρ)` for each radius.
pub fn decay_profile(stress: &StressField, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let r_mesh = stress.disc.mesh.radius;
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &r in &sorted {
        if !(r > 0.0 && r <= r_mesh) {
            return Err(Error::RadiusOutsideMesh(r));
        }
    }
    for w in sorted.windows(2) {
        if w[1] < 2.0 * w[0] * (1.0 - 1e-12) {
            return Err(Error::InvalidArgument(format!("radii {} and {} are closer than a factor 2", w[0], w[1])));
        }
    }
    Ok(radii.iter().map(|&r| (r, stress.energy_in_ball(r) / r)).collect())
}

/// Sides of the arc Poincaré inequality `|v(ξ)|² ≤ πr ∫_{∂B_r}|∂_τ v|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcPoincare {
    pub lhs_max: f64,
    pub rhs: f64,
    /// Angle where the circle leaves the crack.
    pub cut_angle: f64,
}

impl ArcPoincare {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs_max <= self.rhs * (1.0 + tol)
    }
}

/// Samples `v` on `∂B_r` starting and ending at the first crack crossing.
pub fn arc_poincare_check(v: &ScalarField, r: f64) -> Result<ArcPoincare> {
    let m = &v.disc.mesh;
    if !(r > 0.0 && r < m.radius) {
        return Err(Error::RadiusOutsideMesh(r));
    }
    let mut cut: Option<f64> = None;
    for f in &m.crack_faces {
        let (a, b) = (m.vertices[f.nodes[0]], m.vertices[f.nodes[1]]);
        let (ra, rb) = (a.norm(), b.norm());
        if (ra - r) * (rb - r) <= 0.0 && ra != rb {
            let p = a + (b - a) * ((r - ra) / (rb - ra));
            let t = p.y.atan2(p.x).rem_euclid(2.0 * PI);
            cut = Some(cut.map_or(t, |c: f64| c.min(t)));
        }
    }
    let tc = cut.ok_or(Error::CircleMissesCrack(r))?;
    let n = 2048;
    let mut vals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = tc + 2.0 * PI * k as f64 / n as f64;
        let x = vec2(r * t.cos(), r * t.sin());
        let tangent = vec2(-t.sin(), t.cos());
        let hint = if k == n { -tangent } else { tangent };
        vals.push(v.eval(x, hint)?);
    }
    let ds = r * 2.0 * PI / n as f64;
    let lhs_max = vals.iter().map(|x| x * x).fold(0.0, f64::max);
    let energy: f64 = vals.windows(2).map(|w| (w[1] - w[0]).powi(2) / ds).sum();
    Ok(ArcPoincare { lhs_max, rhs: PI * r * energy, cut_angle: tc })
}
