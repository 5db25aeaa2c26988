use crate::geometry::Vec2;
use crate::model::ElasticMaterial;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Angular interval convention for the slit plane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleConvention {
    /// θ ∈ (0, 2π), faces along the positive x-axis.
    #[serde(rename = "theta-0-2pi")]
    ZeroTwoPi,
    /// θ ∈ (−π, π), faces along the negative x-axis (the crack Σ₀).
    #[default]
    #[serde(rename = "theta-pm-pi")]
    PlusMinusPi,
}

/// Which face of the slit a point on the crack line belongs to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Limit from y > 0.
    #[default]
    Upper,
    /// Limit from y < 0.
    Lower,
}

impl Side {
    /// Side selected by a direction pointing into the material.
    pub fn from_direction(d: Vec2) -> Self {
        if d.y < 0.0 {
            Side::Lower
        } else {
            Side::Upper
        }
    }
}

impl AngleConvention {
    pub const ALL: [AngleConvention; 2] = [AngleConvention::ZeroTwoPi, AngleConvention::PlusMinusPi];

    pub fn name(&self) -> &'static str {
        match self {
            AngleConvention::ZeroTwoPi => "theta-0-2pi",
            AngleConvention::PlusMinusPi => "theta-pm-pi",
        }
    }

    /// Open angular interval.
    pub fn interval(&self) -> (f64, f64) {
        match self {
            AngleConvention::ZeroTwoPi => (0.0, 2.0 * PI),
            AngleConvention::PlusMinusPi => (-PI, PI),
        }
    }

    /// Face angle reached from the given side.
    pub fn face_angle(&self, side: Side) -> f64 {
        match (self, side) {
            (AngleConvention::ZeroTwoPi, Side::Upper) => 0.0,
            (AngleConvention::ZeroTwoPi, Side::Lower) => 2.0 * PI,
            (AngleConvention::PlusMinusPi, Side::Upper) => PI,
            (AngleConvention::PlusMinusPi, Side::Lower) => -PI,
        }
    }

    /// Outward unit normal of the material at a face.
    pub fn face_normal(&self, side: Side) -> Vec2 {
        match side {
            Side::Upper => Vec2::new(0.0, -1.0),
            Side::Lower => Vec2::new(0.0, 1.0),
        }
    }

    /// Whether the faces coincide with Σ₀ = (−∞,0]×{0}.
    pub fn faces_on_sigma0(&self) -> bool {
        matches!(self, AngleConvention::PlusMinusPi)
    }

    /// Polar angle of `x`; points on the slit take the face angle of `side`.
    pub fn angle(&self, x: Vec2, side: Side) -> f64 {
        match self {
            AngleConvention::PlusMinusPi => {
                if x.y == 0.0 && x.x < 0.0 {
                    self.face_angle(side)
                } else {
                    x.y.atan2(x.x)
                }
            }
            AngleConvention::ZeroTwoPi => {
                if x.y == 0.0 && x.x > 0.0 {
                    self.face_angle(side)
                } else {
                    let t = x.y.atan2(x.x);
                    if t < 0.0 {
                        t + 2.0 * PI
                    } else {
                        t
                    }
                }
            }
        }
    }
}

/// Formula family for the angular modes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSource {
    /// The formulas as printed, kept for the audit.
    Printed,
    /// Equilibrated, traction-free (displacement) and clamped (Airy) modes
    /// for the chosen convention.
    #[default]
    Validated,
}

/// Coefficients over the half-angle basis `[cos 3θ/2, sin 3θ/2, cos θ/2, sin θ/2]`.
pub type HalfAngleCoefs = [f64; 4];

/// Value, first and second θ-derivative of a half-angle combination.
pub fn half_angle_eval(c: &HalfAngleCoefs, theta: f64) -> (f64, f64, f64) {
    let (s3, c3) = (1.5 * theta).sin_cos();
    let (s1, c1) = (0.5 * theta).sin_cos();
    let v = c[0] * c3 + c[1] * s3 + c[2] * c1 + c[3] * s1;
    let d = 1.5 * (-c[0] * s3 + c[1] * c3) + 0.5 * (-c[2] * s1 + c[3] * c1);
    let dd = -2.25 * (c[0] * c3 + c[1] * s3) - 0.25 * (c[2] * c1 + c[3] * s1);
    (v, d, dd)
}

/// The angular profiles φ₁, φ₂ (displacement, exponent 1/2) and ψ₁, ψ₂ (Airy,
/// exponent 3/2) for a material and a convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularModeSet {
    mat: ElasticMaterial,
    convention: AngleConvention,
    source: ModeSource,
    /// `phi[mode][component]`
    phi: [[HalfAngleCoefs; 2]; 2],
    psi: [HalfAngleCoefs; 2],
}

impl SingularModeSet {
    pub fn new(mat: ElasticMaterial, convention: AngleConvention, source: ModeSource) -> Self {
        let (l, m) = (mat.lambda(), mat.mu());
        let a = 0.5 * (l + m);
        let (phi, psi) = match (source, convention) {
            (ModeSource::Printed, _) => (
                [
                    [[a, 0.0, 0.5 * (l - 3.0 * m), 0.0], [0.0, a, 0.0, 0.5 * (5.0 * l + 9.0 * m)]],
                    [[0.0, -a, 0.0, -0.5 * (3.0 * l + 7.0 * m)], [a, 0.0, 0.5 * (l + 5.0 * m), 0.0]],
                ],
                [[-0.5, 0.0, 1.5, 0.0], [0.0, 0.5, 0.0, 1.5]],
            ),
            (ModeSource::Validated, AngleConvention::PlusMinusPi) => (
                [
                    [[a, 0.0, -0.5 * (l + 5.0 * m), 0.0], [0.0, a, 0.0, -0.5 * (3.0 * l + 7.0 * m)]],
                    [[0.0, -a, 0.0, -0.5 * (5.0 * l + 9.0 * m)], [a, 0.0, 0.5 * (3.0 * m - l), 0.0]],
                ],
                [[0.5, 0.0, 1.5, 0.0], [0.0, 1.5, 0.0, 1.5]],
            ),
            (ModeSource::Validated, AngleConvention::ZeroTwoPi) => (
                [
                    [[a, 0.0, -0.5 * (5.0 * l + 9.0 * m), 0.0], [0.0, a, 0.0, 0.5 * (l - 3.0 * m)]],
                    [[0.0, -a, 0.0, -0.5 * (l + 5.0 * m)], [a, 0.0, 0.5 * (3.0 * l + 7.0 * m), 0.0]],
                ],
                [[-1.5, 0.0, 1.5, 0.0], [0.0, -0.5, 0.0, 1.5]],
            ),
        };
        Self { mat, convention, source, phi, psi }
    }

    /// Validated modes in the theta-pm-pi convention.
    pub fn validated(mat: ElasticMaterial) -> Self {
        Self::new(mat, AngleConvention::PlusMinusPi, ModeSource::Validated)
    }

    pub fn printed(mat: ElasticMaterial, convention: AngleConvention) -> Self {
        Self::new(mat, convention, ModeSource::Printed)
    }

    pub fn material(&self) -> ElasticMaterial {
        self.mat
    }

    pub fn convention(&self) -> AngleConvention {
        self.convention
    }

    pub fn source(&self) -> ModeSource {
        self.source
    }

    pub fn phi_coefs(&self, mode: usize) -> [HalfAngleCoefs; 2] {
        self.phi[mode]
    }

    pub fn psi_coefs(&self, mode: usize) -> HalfAngleCoefs {
        self.psi[mode]
    }

    /// `(φ₁(θ), φ₂(θ))`.
    pub fn eval_displacement_modes(&self, theta: f64) -> (Vec2, Vec2) {
        let f = |k: usize| Vec2::new(half_angle_eval(&self.phi[k][0], theta).0, half_angle_eval(&self.phi[k][1], theta).0);
        (f(0), f(1))
    }

    /// `(ψ₁(θ), ψ₂(θ))`.
    pub fn eval_airy_modes(&self, theta: f64) -> (f64, f64) {
        (half_angle_eval(&self.psi[0], theta).0, half_angle_eval(&self.psi[1], theta).0)
    }
}

/// One row of the exported mode table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRow {
    pub theta: f64,
    pub phi1: [f64; 2],
    pub phi2: [f64; 2],
    pub psi1: f64,
    pub psi2: f64,
}

/// Mode values on `n` equispaced interior angles of the convention's interval.
pub fn mode_table(modes: &SingularModeSet, n: usize) -> Vec<ModeRow> {
    let (a, b) = modes.convention().interval();
    (0..n)
        .map(|k| {
            let theta = a + (b - a) * (k as f64 + 0.5) / n as f64;
            let (p1, p2) = modes.eval_displacement_modes(theta);
            let (q1, q2) = modes.eval_airy_modes(theta);
            ModeRow { theta, phi1: [p1.x, p1.y], phi2: [p2.x, p2.y], psi1: q1, psi2: q2 }
        })
        .collect()
}
