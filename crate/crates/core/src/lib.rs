//! Numerical laboratory for crack-tip singularities in planar linear elasticity.
//!
//! The modules follow the pipeline: material and crack geometry ([`model`]),
//! closed-form singular fields ([`singular`]), the crack-conforming finite
//! element solver ([`fem`]), dual potentials ([`airy`]), blow-up fits
//! ([`blowup`]), energy release rates ([`err`]) and the biharmonic pencil
//! spectrum ([`pencil`]).

// `!(x > 0.0)` rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod blowup;
pub mod err;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod model;
pub mod pencil;
pub mod quadrature;
pub mod singular;

pub use error::{Error, Result};
pub use geometry::{vec2, Vec2};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
