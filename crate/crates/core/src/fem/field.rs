use super::locate::Locator;
use super::mesh::{CrackMesh, ElementOrder};
use super::space::{shape_gradients, shape_values, FeSpace, Simplex};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::model::{ElasticMaterial, SymTensor2};
use crate::quadrature::TRI3;
use std::sync::{Arc, OnceLock};

/// Opened mesh together with its displacement space.
#[derive(Debug)]
pub struct Discretization {
    pub mesh: CrackMesh,
    pub space: FeSpace,
    locator: OnceLock<Locator>,
}

impl Discretization {
    pub fn new(mesh: CrackMesh) -> Arc<Self> {
        let space = FeSpace::new(&mesh, mesh.order);
        Arc::new(Self { mesh, space, locator: OnceLock::new() })
    }

    pub fn order(&self) -> ElementOrder {
        self.space.order
    }

    pub(crate) fn simplex(&self, t: usize) -> Simplex {
        Simplex::new(self.mesh.triangles[t].map(|i| self.mesh.vertices[i]))
    }

    /// Shape function values and gradients of element `t` at barycentric `l`.
    pub(crate) fn shape_at(&self, t: usize, l: [f64; 3]) -> (Vec<f64>, Vec<Vec2>) {
        let s = self.simplex(t);
        (shape_values(self.order(), l), shape_gradients(self.order(), &s, l))
    }

    /// Containing triangle and barycentric coordinates; `hint` picks the
    /// crack face for points on the crack.
    pub fn locate(&self, x: Vec2, hint: Vec2) -> Result<(usize, [f64; 3])> {
        self.locator
            .get_or_init(|| Locator::new(&self.mesh))
            .locate(&self.mesh, x, hint)
            .ok_or(Error::PointOutsideDomain { x: x.x, y: x.y })
    }
}

/// Nodal displacement on a discretization.
#[derive(Debug, Clone)]
pub struct DisplacementField {
    pub disc: Arc<Discretization>,
    pub values: Vec<Vec2>,
}

/// Element-wise symmetric tensor field (stress or strain), one value per
/// triangle; for P2 the value at the centroid.
#[derive(Debug, Clone)]
pub struct StressField {
    pub disc: Arc<Discretization>,
    pub values: Vec<SymTensor2>,
}

impl DisplacementField {
    pub fn zeros(disc: &Arc<Discretization>) -> Self {
        Self { disc: disc.clone(), values: vec![Vec2::zeros(); disc.space.num_nodes()] }
    }

    /// Interpolates `f(node, hint)` at the Lagrange nodes.
    pub fn interpolate(disc: &Arc<Discretization>, f: impl Fn(Vec2, Vec2) -> Vec2) -> Self {
        let s = &disc.space;
        Self { disc: disc.clone(), values: (0..s.num_nodes()).map(|i| f(s.nodes[i], s.hint[i])).collect() }
    }

    pub fn eval_in(&self, t: usize, l: [f64; 3]) -> Vec2 {
        let el = &self.disc.space.elements[t];
        shape_values(self.disc.order(), l).iter().zip(el).map(|(n, &i)| self.values[i] * *n).sum()
    }

    /// `∇u` at a barycentric point; columns are `∂_x u`, `∂_y u`.
    pub fn gradient_in(&self, t: usize, l: [f64; 3]) -> [Vec2; 2] {
        let s = self.disc.simplex(t);
        let el = &self.disc.space.elements[t];
        let mut dx = Vec2::zeros();
        let mut dy = Vec2::zeros();
        for (g, &i) in shape_gradients(self.disc.order(), &s, l).iter().zip(el) {
            dx += self.values[i] * g.x;
            dy += self.values[i] * g.y;
        }
        [dx, dy]
    }

    pub fn strain_in(&self, t: usize, l: [f64; 3]) -> SymTensor2 {
        let [dx, dy] = self.gradient_in(t, l);
        SymTensor2::sym_of(dx.x, dy.x, dx.y, dy.y)
    }

    /// Value at `x`; `hint` points into the material on the wanted crack face.
    pub fn eval(&self, x: Vec2, hint: Vec2) -> Result<Vec2> {
        let (t, l) = self.disc.locate(x, hint)?;
        Ok(self.eval_in(t, l))
    }

    /// `½∫ Ce(u):e(u)`, exact for the polynomial field.
    pub fn elastic_energy(&self, mat: &ElasticMaterial) -> f64 {
        let quad: &[([f64; 3], f64)] = match self.disc.order() {
            ElementOrder::P1 => &[([1.0 / 3.0; 3], 1.0)],
            ElementOrder::P2 => &TRI3,
        };
        (0..self.disc.mesh.triangles.len())
            .map(|t| {
                let a = self.disc.mesh.area(t);
                quad.iter()
                    .map(|(l, w)| {
                        let e = self.strain_in(t, *l);
                        0.5 * w * a * mat.apply_hooke(e).ddot(&e)
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// Element stress `C e(u_h)`.
    pub fn stress_recovery(&self, mat: &ElasticMaterial) -> StressField {
        let values = (0..self.disc.mesh.triangles.len())
            .map(|t| mat.apply_hooke(self.strain_in(t, [1.0 / 3.0; 3])))
            .collect();
        StressField { disc: self.disc.clone(), values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }
}

impl StressField {
    pub fn zeros(disc: &Arc<Discretization>) -> Self {
        Self { disc: disc.clone(), values: vec![SymTensor2::default(); disc.mesh.triangles.len()] }
    }

    pub fn from_fn(disc: &Arc<Discretization>, f: impl Fn(usize) -> SymTensor2) -> Self {
        Self { disc: disc.clone(), values: (0..disc.mesh.triangles.len()).map(f).collect() }
    }

    /// `∫_{B_ρ}|σ|²`, counting elements whose centroid lies in the disk.
    pub fn energy_in_ball(&self, rho: f64) -> f64 {
        let m = &self.disc.mesh;
        (0..m.triangles.len()).filter(|&t| m.centroid(t).norm() < rho).map(|t| m.area(t) * self.values[t].norm_squared()).sum()
    }

    /// `∫|σ|²` over the whole mesh.
    pub fn l2_squared(&self) -> f64 {
        let m = &self.disc.mesh;
        (0..m.triangles.len()).map(|t| m.area(t) * self.values[t].norm_squared()).sum()
    }
}
