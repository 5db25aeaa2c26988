//! Clamped biharmonic pencil on the slit plane.
//!
//! Separated solutions `r^λ φ(θ)` of `Δ²w = 0` with `φ = φ′ = 0` on both faces
//! solve `(d²/dθ² + (λ−2)²)(d²/dθ² + λ²)φ = 0`. The characteristic matrix
//! imposes the four clamped conditions on a basis of that ODE.

use crate::error::{Error, Result};
use crate::model::golden_section;
use crate::quadrature::gauss_legendre_interval;
use crate::model::ElasticMaterial;
use crate::singular::{half_angle_eval, AngleConvention, ModeSource, SingularModeSet};
use nalgebra::{Matrix4, SVD};
use serde::{Deserialize, Serialize};

/// Distance to {0, 1, 2} below which the plain basis is refused.
pub const DEGENERATE_GUARD: f64 = 1e-6;
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
const SCAN_STEP: f64 = 1e-3;

/// Angular basis of the ODE solution space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// `{cos λθ, sin λθ, cos (λ−2)θ, sin (λ−2)θ}`.
    Plain,
    /// `{cos λθ, sin λθ/λ, [cos(λ−2)θ − cos λθ]/4(1−λ), [sin(λ−2)θ/(λ−2) − sin λθ/λ]/4(1−λ)}`,
    /// smooth in λ and complete at λ ∈ {0, 1, 2}.
    Supplemented,
}

/// `sin(aθ)/a`, equal to θ at a = 0.
fn sin_over(a: f64, theta: f64) -> f64 {
    let x = a * theta;
    if x.abs() < 1e-4 {
        theta * (1.0 - x * x / 6.0)
    } else {
        x.sin() / a
    }
}

fn near_degenerate(lambda: f64, guard: f64) -> bool {
    [0.0, 1.0, 2.0].iter().any(|d| (lambda - d).abs() <= guard)
}

/// Values of the four basis functions and their first derivatives at θ.
pub fn basis_eval(kind: BasisKind, lambda: f64, theta: f64) -> ([f64; 4], [f64; 4]) {
    let (sl, cl) = (lambda * theta).sin_cos();
    match kind {
        BasisKind::Plain => {
            let (sm, cm) = ((lambda - 2.0) * theta).sin_cos();
            (
                [cl, sl, cm, sm],
                [-lambda * sl, lambda * cl, -(lambda - 2.0) * sm, (lambda - 2.0) * cm],
            )
        }
        BasisKind::Supplemented => {
            let d = lambda - 1.0;
            let (st, ct) = theta.sin_cos();
            let cd = (d * theta).cos();
            let sinc_d = sin_over(d, theta);
            let b3 = -0.5 * st * sinc_d;
            let b3p = -0.5 * (ct * sinc_d + st * cd);
            let b4 = if d.abs() < 0.5 {
                (ct * sinc_d - st * cd) / (2.0 * (1.0 - d * d))
            } else {
                (sin_over(lambda - 2.0, theta) - sin_over(lambda, theta)) / (4.0 * (1.0 - lambda))
            };
            ([cl, sin_over(lambda, theta), b3, b4], [-lambda * sl, cl, b3p, b3])
        }
    }
}

fn clamped_matrix(kind: BasisKind, lambda: f64, conv: AngleConvention) -> Matrix4<f64> {
    let (a, b) = conv.interval();
    let (va, da) = basis_eval(kind, lambda, a);
    let (vb, db) = basis_eval(kind, lambda, b);
    Matrix4::from_row_slice(&[va, da, vb, db].concat())
}

/// Clamped conditions `φ, φ′` at both faces (rows) over the plain basis (columns).
pub fn characteristic_matrix(lambda: f64, conv: AngleConvention) -> Result<Matrix4<f64>> {
    if near_degenerate(lambda, DEGENERATE_GUARD) {
        return Err(Error::DegenerateExponent(lambda));
    }
    Ok(clamped_matrix(BasisKind::Plain, lambda, conv))
}

/// Same conditions over the supplemented basis, valid for every λ.
pub fn supplemented_matrix(lambda: f64, conv: AngleConvention) -> Matrix4<f64> {
    clamped_matrix(BasisKind::Supplemented, lambda, conv)
}

fn sorted_svd(m: Matrix4<f64>) -> (Vec<f64>, Vec<nalgebra::Vector4<f64>>) {
    let svd = SVD::new(m, false, true);
    let vt = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let s = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let v = idx.iter().map(|&i| vt.row(i).transpose()).collect();
    (s, v)
}

/// Smallest singular value relative to the largest.
fn relative_sigma_min(lambda: f64, conv: AngleConvention) -> f64 {
    let (s, _) = sorted_svd(supplemented_matrix(lambda, conv));
    s[3] / s[0]
}

/// One root of the characteristic determinant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: usize,
    pub basis: BasisKind,
    /// Orthonormal null-space vectors over `basis`.
    pub eigvecs: Vec<[f64; 4]>,
}

/// Options for the root scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub rank_threshold: f64,
    pub root_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { rank_threshold: DEFAULT_RANK_THRESHOLD, root_tol: DEFAULT_ROOT_TOL }
    }
}

fn null_space(lambda: f64, conv: AngleConvention, threshold: f64) -> (BasisKind, Vec<[f64; 4]>) {
    // rank is decided in the well-scaled supplemented basis
    let (s, v) = sorted_svd(supplemented_matrix(lambda, conv));
    let nullity = s.iter().filter(|&&x| x <= threshold * s[0]).count();
    if near_degenerate(lambda, DEGENERATE_GUARD) {
        return (BasisKind::Supplemented, v[4 - nullity..].iter().map(|x| [x[0], x[1], x[2], x[3]]).collect());
    }
    let (_, vp) = sorted_svd(clamped_matrix(BasisKind::Plain, lambda, conv));
    (BasisKind::Plain, vp[4 - nullity..].iter().map(|x| [x[0], x[1], x[2], x[3]]).collect())
}

/// Real roots of the characteristic determinant in `[a, b]`.
///
/// The determinant has double roots, so the scan follows the smallest
/// relative singular value on a 1e−3 grid and refines every local minimum by
/// golden section; a minimum is a root when it falls below the rank threshold.
pub fn spectrum_in_interval(a: f64, b: f64, conv: AngleConvention, opts: SpectrumOptions) -> Result<Vec<SpectrumEntry>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("spectrum interval must satisfy a < b, got [{a}, {b}]")));
    }
    let n = ((b - a) / SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| if k == n { b } else { a + k as f64 * SCAN_STEP }).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| relative_sigma_min(l, conv)).collect();
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..grid.len() {
        let left = if i > 0 { vals[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < grid.len() { vals[i + 1] } else { f64::INFINITY };
        if !(vals[i] <= left && vals[i] < right) {
            continue;
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let (x, fx) = golden_section(|l| relative_sigma_min(l, conv), lo, hi, opts.root_tol);
        let (x, fx) = if fx <= vals[i] { (x, fx) } else { (grid[i], vals[i]) };
        if fx <= opts.rank_threshold && x >= a && x <= b && roots.last().is_none_or(|&r| (x - r).abs() > 10.0 * SCAN_STEP) {
            roots.push(x);
        }
    }
    Ok(roots
        .into_iter()
        .map(|lambda| {
            let (basis, eigvecs) = null_space(lambda, conv, opts.rank_threshold);
            SpectrumEntry { lambda, multiplicity: eigvecs.len(), basis, eigvecs }
        })
        .collect())
}

/// `φ(θ) = Σ coefs_k b_k(θ)` for one basis at one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularFunction {
    pub lambda: f64,
    pub basis: BasisKind,
    pub coefs: [f64; 4],
}

impl AngularFunction {
    pub fn eval(&self, theta: f64) -> f64 {
        let (v, _) = basis_eval(self.basis, self.lambda, theta);
        (0..4).map(|k| self.coefs[k] * v[k]).sum()
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        let (_, d) = basis_eval(self.basis, self.lambda, theta);
        (0..4).map(|k| self.coefs[k] * d[k]).sum()
    }

    /// Largest of `|φ|, |φ′|` at the two faces.
    pub fn clamped_residual(&self, conv: AngleConvention) -> f64 {
        let (a, b) = conv.interval();
        [self.eval(a), self.derivative(a), self.eval(b), self.derivative(b)].iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Null-space eigenfunctions at a root, orthonormal in L² of the angular interval.
pub fn eigenfunctions(lambda: f64, conv: AngleConvention, rank_threshold: f64) -> Result<Vec<AngularFunction>> {
    let (basis, vecs) = null_space(lambda, conv, rank_threshold);
    if vecs.is_empty() {
        return Err(Error::NotARoot(lambda));
    }
    let funcs: Vec<AngularFunction> = vecs.into_iter().map(|coefs| AngularFunction { lambda, basis, coefs }).collect();
    Ok(orthonormalize(&funcs, conv))
}

fn angular_rule(conv: AngleConvention) -> Vec<(f64, f64)> {
    let (a, b) = conv.interval();
    let pieces = 8;
    (0..pieces)
        .flat_map(|k| {
            let lo = a + (b - a) * k as f64 / pieces as f64;
            let hi = a + (b - a) * (k + 1) as f64 / pieces as f64;
            gauss_legendre_interval(24, lo, hi)
        })
        .collect()
}

fn inner(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, rule: &[(f64, f64)]) -> f64 {
    rule.iter().map(|&(t, w)| w * f(t) * g(t)).sum()
}

/// Gram–Schmidt in L²; the coefficient vectors are transformed accordingly.
fn orthonormalize(funcs: &[AngularFunction], conv: AngleConvention) -> Vec<AngularFunction> {
    let rule = angular_rule(conv);
    let mut out: Vec<AngularFunction> = Vec::new();
    for f in funcs {
        let mut c = f.coefs;
        for q in &out {
            let cur = AngularFunction { coefs: c, ..*f };
            let p = inner(|t| cur.eval(t), |t| q.eval(t), &rule);
            for k in 0..4 {
                c[k] -= p * q.coefs[k];
            }
        }
        let cur = AngularFunction { coefs: c, ..*f };
        let n = inner(|t| cur.eval(t), |t| cur.eval(t), &rule).sqrt();
        if n > 1e-12 {
            out.push(AngularFunction { coefs: c.map(|x| x / n), ..*f });
        }
    }
    out
}

/// Relative L² residual of projecting `f` onto the span of orthonormal `space`.
/// The zero function has residual 0.
pub fn projection_residual(f: impl Fn(f64) -> f64, space: &[AngularFunction], conv: AngleConvention) -> f64 {
    let rule = angular_rule(conv);
    let nf2 = inner(&f, &f, &rule);
    if nf2 == 0.0 {
        return 0.0;
    }
    let coefs: Vec<f64> = space.iter().map(|q| inner(&f, |t| q.eval(t), &rule)).collect();
    let r = |t: f64| f(t) - space.iter().zip(&coefs).map(|(q, c)| c * q.eval(t)).sum::<f64>();
    (inner(r, r, &rule) / nf2).max(0.0).sqrt()
}

/// Whether a pair of functions spans an eigenspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanMatch {
    Equal,
    Partial,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionAudit {
    pub convention: AngleConvention,
    pub eigenspace_dim: usize,
    /// Eigenspace basis over the half-angle coefficients `[cos 3θ/2, sin 3θ/2, cos θ/2, sin θ/2]`.
    pub eigenspace: Vec<[f64; 4]>,
    pub printed_residuals: [f64; 2],
    pub printed_match: SpanMatch,
    pub validated_residuals: [f64; 2],
    pub validated_match: SpanMatch,
}

/// Audit of the printed Airy modes against the λ = 3/2 clamped eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperModeReport {
    pub threshold: f64,
    pub audits: Vec<ConventionAudit>,
}

fn classify(res: [f64; 2], threshold: f64, dim: usize) -> SpanMatch {
    let hits = res.iter().filter(|&&r| r < threshold).count();
    match hits {
        2 if dim == 2 => SpanMatch::Equal,
        0 => SpanMatch::None,
        _ => SpanMatch::Partial,
    }
}

/// Rewrites a λ = 3/2 plain-basis function over the half-angle basis
/// (`cos(λ−2)θ = cos θ/2`, `sin(λ−2)θ = −sin θ/2`).
fn half_angle_coefs(f: &AngularFunction) -> [f64; 4] {
    [f.coefs[0], f.coefs[1], f.coefs[2], -f.coefs[3]]
}

pub fn audit_convention(conv: AngleConvention, threshold: f64) -> Result<ConventionAudit> {
    let space = eigenfunctions(1.5, conv, DEFAULT_RANK_THRESHOLD)?;
    let mat = ElasticMaterial::default();
    let res = |src: ModeSource| {
        let m = SingularModeSet::new(mat, conv, src);
        let r = |k: usize| {
            let c = m.psi_coefs(k);
            projection_residual(|t| half_angle_eval(&c, t).0, &space, conv)
        };
        [r(0), r(1)]
    };
    let printed = res(ModeSource::Printed);
    let validated = res(ModeSource::Validated);
    Ok(ConventionAudit {
        convention: conv,
        eigenspace_dim: space.len(),
        eigenspace: space.iter().map(half_angle_coefs).collect(),
        printed_residuals: printed,
        printed_match: classify(printed, threshold, space.len()),
        validated_residuals: validated,
        validated_match: classify(validated, threshold, space.len()),
    })
}

/// Audits both conventions with match threshold 1e−8.
pub fn verify_paper_modes() -> Result<PaperModeReport> {
    let threshold = 1e-8;
    let audits = AngleConvention::ALL.iter().map(|&c| audit_convention(c, threshold)).collect::<Result<Vec<_>>>()?;
    Ok(PaperModeReport { threshold, audits })
}

fn fmt_residual(x: f64) -> String {
    if x < 1e-12 {
        "<1e-12".to_string()
    } else {
        format!("{x:.6e}")
    }
}

fn fmt_coef(x: f64) -> String {
    let y = if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{y:+.9}")
}

impl PaperModeReport {
    /// Human-readable report; residuals below 1e−12 are printed as `<1e-12`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("Airy mode audit against the clamped eigenspace at lambda = 3/2\n");
        s.push_str(&format!("match threshold: {:e}\n", self.threshold));
        for a in &self.audits {
            s.push_str(&format!("\n[{}]\n", a.convention.name()));
            s.push_str(&format!("eigenspace dimension: {}\n", a.eigenspace_dim));
            s.push_str("eigenspace basis over [cos 3t/2, sin 3t/2, cos t/2, sin t/2]:\n");
            for v in &a.eigenspace {
                // fix the sign so the report is reproducible
                let k = (0..4).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0);
                let sg = if v[k] < 0.0 { -1.0 } else { 1.0 };
                let c: Vec<String> = v.iter().map(|x| fmt_coef(sg * x)).collect();
                s.push_str(&format!("  [{}]\n", c.join(", ")));
            }
            s.push_str(&format!(
                "printed psi1 residual: {}\nprinted psi2 residual: {}\nprinted span: {:?}\n",
                fmt_residual(a.printed_residuals[0]),
                fmt_residual(a.printed_residuals[1]),
                a.printed_match
            ));
            s.push_str(&format!(
                "validated psi1 residual: {}\nvalidated psi2 residual: {}\nvalidated span: {:?}\n",
                fmt_residual(a.validated_residuals[0]),
                fmt_residual(a.validated_residuals[1]),
                a.validated_match
            ));
        }
        s
    }
}

/// Finite-difference residual of the pencil ODE for one angular function.
pub fn ode_residual(f: &AngularFunction, theta: f64, h: f64) -> f64 {
    let l = f.lambda;
    let (a2, b2) = (l * l, (l - 2.0) * (l - 2.0));
    let v: Vec<f64> = (-2..=2).map(|k| f.eval(theta + k as f64 * h)).collect();
    let d2 = (v[1] - 2.0 * v[2] + v[3]) / (h * h);
    let d4 = (v[0] - 4.0 * v[1] + 6.0 * v[2] - 4.0 * v[3] + v[4]) / h.powi(4);
    d4 + (a2 + b2) * d2 + a2 * b2 * v[2]
}

/// Relative determinant of the plain characteristic matrix, for symmetry checks.
pub fn determinant(lambda: f64, conv: AngleConvention) -> Result<f64> {
    characteristic_matrix(lambda, conv).map(|m| m.determinant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    const Z2: AngleConvention = AngleConvention::ZeroTwoPi;
    const PM: AngleConvention = AngleConvention::PlusMinusPi;

    #[test]
    fn first_row_at_three_halves() {
        let m = characteristic_matrix(1.5, Z2).unwrap();
        assert_eq!([m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(0, 3)]], [1.0, 0.0, 1.0, 0.0]);
        assert!(m.determinant().abs() < 1e-10);
        assert!(determinant(1.25, Z2).unwrap().abs() > 1e-3);
        assert_eq!(characteristic_matrix(1.0 + 1e-7, Z2), Err(Error::DegenerateExponent(1.0 + 1e-7)));
    }

    #[test]
    fn supplemented_basis_solves_the_ode() {
        for l in [0.0, 0.3, 1.0, 1.0 + 1e-9, 1.4, 2.0, 2.7] {
            for k in 0..4 {
                let mut c = [0.0; 4];
                c[k] = 1.0;
                let f = AngularFunction { lambda: l, basis: BasisKind::Supplemented, coefs: c };
                let h = 1e-2;
                let r = ode_residual(&f, 0.7, h);
                assert!(r.abs() < 1e-4 * (l + 2.0).powi(4), "lambda {l} k {k} residual {r}");
                let fd = (f.eval(0.7 + 1e-6) - f.eval(0.7 - 1e-6)) / 2e-6;
                assert_relative_eq!(fd, f.derivative(0.7), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn supplemented_branches_agree_across_the_switch() {
        for theta in [-2.0, 0.5, 4.0] {
            let a = basis_eval(BasisKind::Supplemented, 1.5 - 1e-12, theta).0[3];
            let b = basis_eval(BasisKind::Supplemented, 1.5 + 1e-12, theta).0[3];
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectrum_on_reference_interval() {
        for conv in AngleConvention::ALL {
            let s = spectrum_in_interval(0.4, 3.6, conv, SpectrumOptions::default()).unwrap();
            let ls: Vec<f64> = s.iter().map(|e| e.lambda).collect();
            let expected = [0.5, 1.5, 2.0, 2.5, 3.0, 3.5];
            assert_eq!(ls.len(), expected.len(), "{ls:?}");
            for (l, e) in ls.iter().zip(expected) {
                assert!((l - e).abs() < 1e-9, "{l} vs {e}");
            }
            for e in &s {
                let want = if (e.lambda - 2.0).abs() < 1e-6 { 1 } else { 2 };
                assert_eq!(e.multiplicity, want, "at {}", e.lambda);
            }
        }
    }

    #[test]
    fn zero_is_a_simple_root() {
        let s = spectrum_in_interval(-0.2, 0.2, Z2, SpectrumOptions::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].lambda.abs() < 1e-9);
        assert_eq!(s[0].multiplicity, 1);
        assert_eq!(s[0].basis, BasisKind::Supplemented);
    }

    #[test]
    fn no_roots_between_one_and_three_halves() {
        assert!(spectrum_in_interval(1.1, 1.4, Z2, SpectrumOptions::default()).unwrap().is_empty());
        assert!(spectrum_in_interval(1.0, 0.5, Z2, SpectrumOptions::default()).is_err());
    }

    #[test]
    fn eigenfunctions_are_clamped() {
        for conv in AngleConvention::ALL {
            for l in [0.5, 1.5, 2.0, 2.5] {
                let fs = eigenfunctions(l, conv, DEFAULT_RANK_THRESHOLD).unwrap();
                for f in &fs {
                    assert!(f.clamped_residual(conv) < 1e-10);
                    let (a, b) = conv.interval();
                    let mid = 0.5 * (a + b) + 0.3;
                    let scale = f.eval(mid).abs().max(1.0);
                    assert!(ode_residual(f, mid, 1e-2).abs() < 1e-3 * scale * (l + 2.0).powi(4));
                }
            }
        }
        assert_eq!(eigenfunctions(1.25, Z2, DEFAULT_RANK_THRESHOLD), Err(Error::NotARoot(1.25)));
    }

    #[test]
    fn pm_pi_eigenspace_matches_hand_solution() {
        let space = eigenfunctions(1.5, PM, DEFAULT_RANK_THRESHOLD).unwrap();
        assert_eq!(space.len(), 2);
        let f1 = |t: f64| (1.5 * t).cos() + 3.0 * (0.5 * t).cos();
        let f2 = |t: f64| (1.5 * t).sin() + (0.5 * t).sin();
        assert!(projection_residual(f1, &space, PM) < 1e-10);
        assert!(projection_residual(f2, &space, PM) < 1e-10);
    }

    #[test]
    fn self_projection_and_zero_function() {
        let space = eigenfunctions(1.5, Z2, DEFAULT_RANK_THRESHOLD).unwrap();
        for f in &space {
            assert!(projection_residual(|t| f.eval(t), &space, Z2) < 1e-12);
        }
        assert_eq!(projection_residual(|_| 0.0, &space, Z2), 0.0);
    }

    #[test]
    fn printed_airy_modes_fail_the_audit() {
        let report = verify_paper_modes().unwrap();
        for a in &report.audits {
            assert_eq!(a.eigenspace_dim, 2);
            assert_eq!(a.validated_match, SpanMatch::Equal);
            assert_ne!(a.printed_match, SpanMatch::Equal);
        }
        assert!(report.to_text().contains("theta-pm-pi"));
    }

    #[test]
    fn roots_lie_in_the_half_integer_set() {
        let s = spectrum_in_interval(-5.0, 5.0, Z2, SpectrumOptions::default()).unwrap();
        for e in &s {
            let k = 2.0 * (e.lambda - 1.0);
            assert!(k.abs() >= 1.0 - 1e-9 && (k - k.round()).abs() < 20.0 * DEFAULT_ROOT_TOL, "{}", e.lambda);
        }
        assert_eq!(s.len(), 20);
    }

    proptest! {
        #[test]
        fn determinant_is_symmetric_about_one(l in 0.1..0.9f64) {
            for conv in AngleConvention::ALL {
                let a = determinant(l, conv).unwrap().abs();
                let b = determinant(2.0 - l, conv).unwrap().abs();
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
            }
        }
    }
}
