use crate::geometry::{vec2, Vec2};
use serde::{Deserialize, Serialize};

/// Infinitesimal rigid motion `m(x) = (a − c·x₂, b + c·x₁)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RigidMotion {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn eval(&self, x: Vec2) -> Vec2 {
        vec2(self.a - self.c * x.y, self.b + self.c * x.x)
    }
}
