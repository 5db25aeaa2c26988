//! Blow-up of computed fields at the crack tip and least-squares fits of the
//! singular-mode coefficients.

use crate::airy::ScalarField;
use crate::error::{Error, Result};
use crate::fem::DisplacementField;
use crate::geometry::{rotate, vec2, Vec2};
use crate::model::{CrackSet, RigidMotion};
use crate::singular::{Side, SingularAiry, SingularDisplacement, SingularModeSet};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_ANNULUS: (f64, f64) = (0.5, 1.0);
pub const MIN_SAMPLES: usize = 64;

/// `u_ε(y) = ε^{−1/2} R u(R⁻¹(εy))` with `R` the rotation by `rot`. The hint is
/// a direction in rescaled coordinates pointing into the material.
pub fn rescale_displacement(u: &DisplacementField, eps: f64, rot: f64, y: Vec2, hint: Vec2) -> Result<Vec2> {
    let x = rotate(y * eps, -rot);
    Ok(rotate(u.eval(x, rotate(hint, -rot))?, rot) / eps.sqrt())
}

/// `w_ε(y) = ε^{−3/2} w(R⁻¹(εy))`.
pub fn rescale_airy(w: &ScalarField, eps: f64, rot: f64, y: Vec2, hint: Vec2) -> Result<f64> {
    let x = rotate(y * eps, -rot);
    Ok(w.eval(x, rotate(hint, -rot))? / eps.powf(1.5))
}

/// Polar sample grid on an annulus, avoiding the faces of Σ₀ by one angular
/// cell. Returns points with the side hint of their half-plane.
pub fn annulus_samples(annulus: (f64, f64), n_samples: usize) -> Vec<(Vec2, Vec2)> {
    let n_r = ((n_samples as f64 / 8.0).sqrt().round() as usize).max(2);
    let n_t = n_samples.div_ceil(n_r);
    let guard = 2.0 * PI / n_t as f64;
    let (r0, r1) = annulus;
    let mut pts = Vec::with_capacity(n_r * n_t);
    for i in 0..n_r {
        let r = r0 + (r1 - r0) * (i as f64 + 0.5) / n_r as f64;
        for j in 0..n_t {
            let t = -PI + guard + (2.0 * (PI - guard)) * (j as f64 + 0.5) / n_t as f64;
            let hint = if t < 0.0 { vec2(0.0, -1.0) } else { vec2(0.0, 1.0) };
            pts.push((vec2(r * t.cos(), r * t.sin()), hint));
        }
    }
    pts
}

fn check_fit_args(annulus: (f64, f64), n_samples: usize, unknowns: usize) -> Result<()> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Underdetermined { samples: n_samples, unknowns });
    }
    if !(annulus.0 > 0.0 && annulus.1 > annulus.0 && annulus.1.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad fitting annulus ({}, {})", annulus.0, annulus.1)));
    }
    Ok(())
}

/// Linear least squares through the normal equations of the column-normalized
/// design matrix. Returns the coefficients and `‖Ac − b‖ / ‖b‖`.
fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(Vec<f64>, f64)> {
    let scale: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    if scale.contains(&0.0) {
        return Err(Error::Underdetermined { samples: a.nrows(), unknowns: a.ncols() });
    }
    let mut an = a.clone();
    for (j, s) in scale.iter().enumerate() {
        an.column_mut(j).scale_mut(1.0 / s);
    }
    let ata = an.transpose() * &an;
    let atb = an.transpose() * b;
    let chol = ata.cholesky().ok_or(Error::Underdetermined { samples: a.nrows(), unknowns: a.ncols() })?;
    let cn = chol.solve(&atb);
    let c: Vec<f64> = cn.iter().zip(&scale).map(|(c, s)| c / s).collect();
    let bn = b.norm();
    let residual = if bn == 0.0 { 0.0 } else { (a * DVector::from_column_slice(&c) - b).norm() / bn };
    Ok((c, residual))
}

/// Displacement fit `u_ε ≈ m + r^{1/2}(κ₁φ₁ + κ₂φ₂)` on a rescaled annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowUpFit {
    pub eps: f64,
    pub rot: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub rigid: RigidMotion,
    pub residual: f64,
    pub annulus: (f64, f64),
}

impl BlowUpFit {
    pub fn kappa(&self) -> [f64; 2] {
        [self.kappa1, self.kappa2]
    }

    /// The fitted field at a rescaled point.
    pub fn eval(&self, modes: &SingularModeSet, y: Vec2, side: Side) -> Vec2 {
        self.rigid.eval(y) + SingularDisplacement::new(*modes, self.kappa()).eval_side(y, side)
    }
}

/// Fits an arbitrary rescaled displacement `f(y, hint)`.
pub fn fit_modes_sampled(
    f: impl Fn(Vec2, Vec2) -> Result<Vec2>,
    modes: &SingularModeSet,
    annulus: (f64, f64),
    n_samples: usize,
) -> Result<(RigidMotion, [f64; 2], f64)> {
    check_fit_args(annulus, n_samples, 5)?;
    let pts = annulus_samples(annulus, n_samples);
    let mut a = DMatrix::zeros(2 * pts.len(), 5);
    let mut b = DVector::zeros(2 * pts.len());
    let unit = [SingularDisplacement::new(*modes, [1.0, 0.0]), SingularDisplacement::new(*modes, [0.0, 1.0])];
    for (k, &(y, hint)) in pts.iter().enumerate() {
        let side = Side::from_direction(hint);
        let v = f(y, hint)?;
        let p = [unit[0].eval_side(y, side), unit[1].eval_side(y, side)];
        let (rx, ry) = (2 * k, 2 * k + 1);
        a.row_mut(rx).copy_from_slice(&[p[0].x, p[1].x, 1.0, 0.0, -y.y]);
        a.row_mut(ry).copy_from_slice(&[p[0].y, p[1].y, 0.0, 1.0, y.x]);
        b[rx] = v.x;
        b[ry] = v.y;
    }
    let (c, residual) = least_squares(&a, &b)?;
    Ok((RigidMotion::new(c[2], c[3], c[4]), [c[0], c[1]], residual))
}

/// Fits the blow-up of a computed displacement at scale `eps`.
pub fn fit_modes(
    u: &DisplacementField,
    modes: &SingularModeSet,
    eps: f64,
    rot: f64,
    annulus: (f64, f64),
    n_samples: usize,
) -> Result<BlowUpFit> {
    let (rigid, kappa, residual) =
        fit_modes_sampled(|y, hint| rescale_displacement(u, eps, rot, y, hint), modes, annulus, n_samples)?;
    Ok(BlowUpFit { eps, rot, kappa1: kappa[0], kappa2: kappa[1], rigid, residual, annulus })
}

/// Airy fit `w_ε ≈ α + β·y + r^{3/2}(c₁ψ₁ + c₂ψ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AiryFit {
    pub eps: f64,
    pub rot: f64,
    pub c1: f64,
    pub c2: f64,
    /// Affine calibration `(α, β₁, β₂)`.
    pub calibration: [f64; 3],
    pub residual: f64,
    pub annulus: (f64, f64),
}

impl AiryFit {
    pub fn c(&self) -> [f64; 2] {
        [self.c1, self.c2]
    }

    pub fn eval(&self, modes: &SingularModeSet, y: Vec2, side: Side) -> f64 {
        let [a, b1, b2] = self.calibration;
        a + b1 * y.x + b2 * y.y + SingularAiry::new(*modes, self.c()).eval_side(y, side)
    }
}

pub fn fit_airy_modes_sampled(
    f: impl Fn(Vec2, Vec2) -> Result<f64>,
    modes: &SingularModeSet,
    annulus: (f64, f64),
    n_samples: usize,
) -> Result<([f64; 3], [f64; 2], f64)> {
    check_fit_args(annulus, n_samples, 5)?;
    let pts = annulus_samples(annulus, n_samples);
    let mut a = DMatrix::zeros(pts.len(), 5);
    let mut b = DVector::zeros(pts.len());
    let unit = [SingularAiry::new(*modes, [1.0, 0.0]), SingularAiry::new(*modes, [0.0, 1.0])];
    for (k, &(y, hint)) in pts.iter().enumerate() {
        let side = Side::from_direction(hint);
        a.row_mut(k)
            .copy_from_slice(&[unit[0].eval_side(y, side), unit[1].eval_side(y, side), 1.0, y.x, y.y]);
        b[k] = f(y, hint)?;
    }
    let (c, residual) = least_squares(&a, &b)?;
    Ok(([c[2], c[3], c[4]], [c[0], c[1]], residual))
}

pub fn fit_airy_modes(
    w: &ScalarField,
    modes: &SingularModeSet,
    eps: f64,
    rot: f64,
    annulus: (f64, f64),
    n_samples: usize,
) -> Result<AiryFit> {
    let (calibration, c, residual) =
        fit_airy_modes_sampled(|y, hint| rescale_airy(w, eps, rot, y, hint), modes, annulus, n_samples)?;
    Ok(AiryFit { eps, rot, c1: c[0], c2: c[1], calibration, residual, annulus })
}

/// Fits across blow-up radii with successive coefficient changes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub fits: Vec<BlowUpFit>,
    /// `|κ(ε_{k+1}) − κ(ε_k)|`.
    pub kappa_differences: Vec<f64>,
}

/// Fits `u` at every radius of a decreasing list, each with its own alignment
/// rotation. Reports the sequence only; no limit is asserted.
pub fn convergence_table(
    u: &DisplacementField,
    crack: &CrackSet,
    modes: &SingularModeSet,
    eps_list: &[f64],
    annulus: (f64, f64),
    n_samples: usize,
) -> Result<ConvergenceTable> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("blow-up radii must be strictly decreasing".into()));
    }
    let fits = eps_list
        .par_iter()
        .map(|&eps| {
            let rot = crack.blowup_rotation(eps)?;
            fit_modes(u, modes, eps, rot, annulus, n_samples)
        })
        .collect::<Result<Vec<_>>>()?;
    let kappa_differences = fits
        .windows(2)
        .map(|w| vec2(w[1].kappa1 - w[0].kappa1, w[1].kappa2 - w[0].kappa2).norm())
        .collect();
    Ok(ConvergenceTable { fits, kappa_differences })
}
