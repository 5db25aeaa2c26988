use super::modes::{half_angle_eval, AngleConvention, Side, SingularModeSet};
use crate::geometry::{vec2, Vec2};
use crate::model::SymTensor2;
use nalgebra::Matrix2;

/// `u = r^{1/2}(κ₁φ₁ + κ₂φ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularDisplacement {
    pub modes: SingularModeSet,
    pub kappa: [f64; 2],
}

impl SingularDisplacement {
    pub fn new(modes: SingularModeSet, kappa: [f64; 2]) -> Self {
        Self { modes, kappa }
    }

    fn theta(&self, x: Vec2, side: Side) -> f64 {
        self.modes.convention().angle(x, side)
    }

    /// Angular profile Φ(θ) and Φ′(θ).
    fn profile(&self, theta: f64) -> (Vec2, Vec2) {
        let mut v = Vec2::zeros();
        let mut d = Vec2::zeros();
        for k in 0..2 {
            let c = self.modes.phi_coefs(k);
            let (vx, dx, _) = half_angle_eval(&c[0], theta);
            let (vy, dy, _) = half_angle_eval(&c[1], theta);
            v += vec2(vx, vy) * self.kappa[k];
            d += vec2(dx, dy) * self.kappa[k];
        }
        (v, d)
    }

    pub fn eval(&self, x: Vec2) -> Vec2 {
        self.eval_side(x, Side::Upper)
    }

    /// Value on the given face when `x` lies on the slit.
    pub fn eval_side(&self, x: Vec2, side: Side) -> Vec2 {
        let r = x.norm();
        if r == 0.0 {
            return Vec2::zeros();
        }
        self.profile(self.theta(x, side)).0 * r.sqrt()
    }

    /// `∇u` with entries `[i][j] = ∂_j u_i`. Undefined at the tip.
    pub fn gradient_side(&self, x: Vec2, side: Side) -> Matrix2<f64> {
        let r = x.norm();
        let theta = self.theta(x, side);
        let (phi, dphi) = self.profile(theta);
        let (s, c) = theta.sin_cos();
        let k = r.powf(-0.5);
        let dx = (phi * (0.5 * c) - dphi * s) * k;
        let dy = (phi * (0.5 * s) + dphi * c) * k;
        Matrix2::new(dx.x, dy.x, dx.y, dy.y)
    }

    pub fn strain_side(&self, x: Vec2, side: Side) -> SymTensor2 {
        let g = self.gradient_side(x, side);
        SymTensor2::sym_of(g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)])
    }

    pub fn stress(&self, x: Vec2) -> SymTensor2 {
        self.stress_side(x, Side::Upper)
    }

    pub fn stress_side(&self, x: Vec2, side: Side) -> SymTensor2 {
        self.modes.material().apply_hooke(self.strain_side(x, side))
    }

    /// Traction `σ n` on a face at distance `r` from the tip, `n` the outward
    /// normal of the material.
    pub fn crack_traction(&self, r: f64, side: Side) -> Vec2 {
        let conv = self.modes.convention();
        let theta = conv.face_angle(side);
        let x = vec2(r * theta.cos(), r * theta.sin());
        let n = conv.face_normal(side);
        self.stress_side(x, side).mul_vec(n)
    }

    /// Stress magnitude scale at radius `r` (RMS over 256 angles).
    pub fn stress_scale(&self, r: f64) -> f64 {
        rms_over_circle(r, self.modes.convention(), |x| self.stress(x).norm())
    }
}

/// `w = r^{3/2}(c₁ψ₁ + c₂ψ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularAiry {
    pub modes: SingularModeSet,
    pub c: [f64; 2],
}

/// First and second derivatives of `r^a g(θ)`.
pub(crate) fn polar_power_hessian(a: f64, x: Vec2, theta: f64, g: (f64, f64, f64)) -> (f64, Vec2, SymTensor2) {
    let r = x.norm();
    let (g0, g1, g2) = g;
    let (s, c) = theta.sin_cos();
    let ra = r.powf(a);
    let rm1 = r.powf(a - 1.0);
    let rm2 = r.powf(a - 2.0);
    let f_r = a * rm1 * g0;
    let f_t_over_r = rm1 * g1;
    let grad = vec2(c * f_r - s * f_t_over_r, s * f_r + c * f_t_over_r);
    let f_rr = a * (a - 1.0) * rm2 * g0;
    let f_r_r = a * rm2 * g0;
    let f_tt_r2 = rm2 * g2;
    let f_rt_r = a * rm2 * g1;
    let f_t_r2 = rm2 * g1;
    let mixed = f_rt_r - f_t_r2;
    let xx = c * c * f_rr + s * s * (f_r_r + f_tt_r2) - 2.0 * s * c * mixed;
    let yy = s * s * f_rr + c * c * (f_r_r + f_tt_r2) + 2.0 * s * c * mixed;
    let xy = s * c * (f_rr - f_r_r - f_tt_r2) + (c * c - s * s) * mixed;
    (ra * g0, grad, SymTensor2::new(xx, xy, yy))
}

impl SingularAiry {
    pub fn new(modes: SingularModeSet, c: [f64; 2]) -> Self {
        Self { modes, c }
    }

    fn angular(&self, theta: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for k in 0..2 {
            let (v, d, dd) = half_angle_eval(&self.modes.psi_coefs(k), theta);
            out.0 += self.c[k] * v;
            out.1 += self.c[k] * d;
            out.2 += self.c[k] * dd;
        }
        out
    }

    fn parts(&self, x: Vec2, side: Side) -> (f64, Vec2, SymTensor2) {
        let theta = self.modes.convention().angle(x, side);
        polar_power_hessian(1.5, x, theta, self.angular(theta))
    }

    pub fn eval(&self, x: Vec2) -> f64 {
        self.eval_side(x, Side::Upper)
    }

    pub fn eval_side(&self, x: Vec2, side: Side) -> f64 {
        if x.norm() == 0.0 {
            return 0.0;
        }
        self.parts(x, side).0
    }

    pub fn gradient_side(&self, x: Vec2, side: Side) -> Vec2 {
        if x.norm() == 0.0 {
            return Vec2::zeros();
        }
        self.parts(x, side).1
    }

    /// `D²w`. Undefined at the tip.
    pub fn hessian(&self, x: Vec2) -> SymTensor2 {
        self.hessian_side(x, Side::Upper)
    }

    pub fn hessian_side(&self, x: Vec2, side: Side) -> SymTensor2 {
        self.parts(x, side).2
    }
}

pub(crate) fn rms_over_circle(r: f64, conv: AngleConvention, f: impl Fn(Vec2) -> f64) -> f64 {
    let n = 256;
    let (a, b) = conv.interval();
    let s: f64 = (0..n)
        .map(|k| {
            let t = a + (b - a) * (k as f64 + 0.5) / n as f64;
            f(vec2(r * t.cos(), r * t.sin())).powi(2)
        })
        .sum();
    (s / n as f64).sqrt()
}
