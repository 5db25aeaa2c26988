//! Closed-form 1/2-homogeneous displacement modes, 3/2-homogeneous Airy modes,
//! their stresses and finite-difference residuals of the governing PDEs.

mod fields;
mod modes;


pub use fields::{SingularAiry, SingularDisplacement};
pub use modes::{half_angle_eval, mode_table, AngleConvention, HalfAngleCoefs, ModeRow, ModeSource, Side, SingularModeSet};

use crate::geometry::{vec2, Vec2};
use crate::model::SymTensor2;
use nalgebra::{DMatrix, DVector, Matrix2};

/// Central finite-difference divergence of the singular stress.
pub fn lame_residual(sd: &SingularDisplacement, x: Vec2, h: f64) -> Vec2 {
    let s = |p: Vec2| sd.stress(p);
    let (ex, ey) = (vec2(h, 0.0), vec2(0.0, h));
    let dx = (s(x + ex) - s(x - ex)) * (0.5 / h);
    let dy = (s(x + ey) - s(x - ey)) * (0.5 / h);
    vec2(dx.xx + dy.xy, dx.xy + dy.yy)
}

/// 13-point finite-difference bilaplacian of `f` at `x`.
pub fn bilaplacian_fd(f: impl Fn(Vec2) -> f64, x: Vec2, h: f64) -> f64 {
    let at = |i: f64, j: f64| f(x + vec2(i * h, j * h));
    let c = at(0.0, 0.0);
    let axis1 = at(1.0, 0.0) + at(-1.0, 0.0) + at(0.0, 1.0) + at(0.0, -1.0);
    let diag = at(1.0, 1.0) + at(1.0, -1.0) + at(-1.0, 1.0) + at(-1.0, -1.0);
    let axis2 = at(2.0, 0.0) + at(-2.0, 0.0) + at(0.0, 2.0) + at(0.0, -2.0);
    (20.0 * c - 8.0 * axis1 + 2.0 * diag + axis2) / h.powi(4)
}

/// Finite-difference `Δ²w` of the singular Airy function.
pub fn biharmonic_residual(sa: &SingularAiry, x: Vec2, h: f64) -> f64 {
    bilaplacian_fd(|p| sa.eval(p), x, h)
}

/// Least-squares map `κ ↦ c` with `D²(r^{3/2}(c₁ψ₁+c₂ψ₂)) ≈ σ(κ)^⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryCoefficientMap {
    /// Column `j` holds `c` for the unit mode `κ = e_j`.
    pub matrix: Matrix2<f64>,
    /// Largest relative least-squares residual of the two fits.
    pub residual: f64,
}

impl AiryCoefficientMap {
    pub fn apply(&self, kappa: [f64; 2]) -> [f64; 2] {
        let c = self.matrix * nalgebra::Vector2::new(kappa[0], kappa[1]);
        [c.x, c.y]
    }
}

/// Fits the Airy coefficients reproducing the rotated stress of each
/// displacement mode on 128 interior angles of the unit circle.
pub fn airy_coefficient_map(modes: &SingularModeSet) -> AiryCoefficientMap {
    let n = 128;
    let (a, b) = modes.convention().interval();
    let pts: Vec<Vec2> = (0..n)
        .map(|k| {
            let t = a + (b - a) * (k as f64 + 0.5) / n as f64;
            vec2(t.cos(), t.sin())
        })
        .collect();
    let comps = |t: SymTensor2| [t.xx, t.xy, t.yy];
    let mut design = DMatrix::zeros(3 * n, 2);
    for k in 0..2 {
        let mut c = [0.0; 2];
        c[k] = 1.0;
        let sa = SingularAiry::new(*modes, c);
        for (i, p) in pts.iter().enumerate() {
            for (j, v) in comps(sa.hessian(*p)).into_iter().enumerate() {
                design[(3 * i + j, k)] = v;
            }
        }
    }
    let svd = design.clone().svd(true, true);
    let mut matrix = Matrix2::zeros();
    let mut residual: f64 = 0.0;
    for k in 0..2 {
        let mut kappa = [0.0; 2];
        kappa[k] = 1.0;
        let sd = SingularDisplacement::new(*modes, kappa);
        let mut rhs = DVector::zeros(3 * n);
        for (i, p) in pts.iter().enumerate() {
            for (j, v) in comps(sd.stress(*p).airy_rotated()).into_iter().enumerate() {
                rhs[3 * i + j] = v;
            }
        }
        let sol = svd.solve(&rhs, 1e-14).expect("svd computed with both factors");
        matrix[(0, k)] = sol[0];
        matrix[(1, k)] = sol[1];
        residual = residual.max((&design * &sol - &rhs).norm() / rhs.norm());
    }
    AiryCoefficientMap { matrix, residual }
}
