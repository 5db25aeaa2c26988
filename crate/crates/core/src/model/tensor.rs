use crate::geometry::{vec2, Vec2};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Symmetric 2×2 tensor stored by its three independent components.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SymTensor2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymTensor2 {
    pub const ZERO: Self = Self { xx: 0.0, xy: 0.0, yy: 0.0 };
    pub const IDENTITY: Self = Self { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    /// Symmetric part of a (not necessarily symmetric) gradient `[[a, b], [c, d]]`.
    pub fn sym_of(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a, 0.5 * (b + c), d)
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Frobenius inner product `A : B`.
    pub fn ddot(&self, o: &Self) -> f64 {
        self.xx * o.xx + 2.0 * self.xy * o.xy + self.yy * o.yy
    }

    pub fn norm_squared(&self) -> f64 {
        self.ddot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn mul_vec(&self, n: Vec2) -> Vec2 {
        vec2(self.xx * n.x + self.xy * n.y, self.xy * n.x + self.yy * n.y)
    }

    /// The 90° rotation `[[yy, -xy], [-xy, xx]]` that the Airy hessian reproduces.
    pub fn airy_rotated(&self) -> Self {
        Self::new(self.yy, -self.xy, self.xx)
    }
}

impl Add for SymTensor2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for SymTensor2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)
    }
}

impl Neg for SymTensor2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.xx, -self.xy, -self.yy)
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.xx * s, self.xy * s, self.yy * s)
    }
}
