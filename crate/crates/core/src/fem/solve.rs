use super::field::{Discretization, DisplacementField};
use super::linalg::SpdMatrix;
use super::mesh::ElementOrder;
use super::space::{shape_gradients, Simplex};
use crate::error::Result;
use crate::geometry::Vec2;
use crate::model::{ElasticMaterial, RigidMotion};
use crate::quadrature::TRI3;
use crate::singular::{Side, SingularDisplacement};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Prescribed outer displacement `ψ(x, hint)`; the hint points into the
/// material and selects the crack face at the crack mouth.
#[derive(Clone)]
pub struct BoundaryData(Arc<dyn Fn(Vec2, Vec2) -> Vec2 + Send + Sync>);

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BoundaryData(..)")
    }
}

impl BoundaryData {
    pub fn new(f: impl Fn(Vec2, Vec2) -> Vec2 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::new(|_, _| Vec2::zeros())
    }

    pub fn rigid(m: RigidMotion) -> Self {
        Self::new(move |x, _| m.eval(x))
    }

    pub fn singular(sd: SingularDisplacement) -> Self {
        Self::new(move |x, hint| sd.eval_side(x, Side::from_direction(hint)))
    }

    pub fn eval(&self, x: Vec2, hint: Vec2) -> Vec2 {
        (self.0)(x, hint)
    }
}

/// Sizes of a solved system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveStats {
    pub nodes: usize,
    pub triangles: usize,
    pub dofs: usize,
    pub free_dofs: usize,
    pub nonzeros: usize,
    pub pinned_components: usize,
}

/// `D` in Voigt form with engineering shear.
fn elasticity_matrix(mat: &ElasticMaterial) -> [[f64; 3]; 3] {
    let (l, m) = (mat.lambda(), mat.mu());
    [[l + 2.0 * m, l, 0.0], [l, l + 2.0 * m, 0.0], [0.0, 0.0, m]]
}

fn element_quadrature(order: ElementOrder) -> &'static [([f64; 3], f64)] {
    const CENTROID: [([f64; 3], f64); 1] = [([1.0 / 3.0; 3], 1.0)];
    match order {
        ElementOrder::P1 => &CENTROID,
        ElementOrder::P2 => &TRI3,
    }
}

/// Element stiffness in dof order `(x₀, y₀, x₁, y₁, …)`.
pub(crate) fn element_stiffness(disc: &Discretization, t: usize, d: &[[f64; 3]; 3]) -> Vec<f64> {
    let s: Simplex = disc.simplex(t);
    let n = disc.space.nodes_per_element();
    let nd = 2 * n;
    let mut k = vec![0.0; nd * nd];
    for (l, w) in element_quadrature(disc.order()) {
        let g = shape_gradients(disc.order(), &s, *l);
        // B columns: strain (xx, yy, 2xy) per dof
        let b: Vec<[f64; 3]> = (0..nd)
            .map(|c| {
                let gi = g[c / 2];
                if c % 2 == 0 {
                    [gi.x, 0.0, gi.y]
                } else {
                    [0.0, gi.y, gi.x]
                }
            })
            .collect();
        let db: Vec<[f64; 3]> =
            b.iter().map(|bc| [0, 1, 2].map(|r| d[r][0] * bc[0] + d[r][1] * bc[1] + d[r][2] * bc[2])).collect();
        let wa = w * s.area;
        for i in 0..nd {
            for j in 0..nd {
                k[i * nd + j] += wa * (b[i][0] * db[j][0] + b[i][1] * db[j][1] + b[i][2] * db[j][2]);
            }
        }
    }
    k
}

/// Outer boundary treatment.
#[derive(Debug, Clone)]
pub enum OuterCondition {
    Dirichlet(BoundaryData),
    /// Traction-free outer boundary.
    Natural,
}

/// Nodes fixing rigid motions of components without Dirichlet nodes: both
/// components at the smallest node, one at the next.
fn pinned_components(disc: &Discretization, dirichlet: &[bool]) -> Vec<usize> {
    let (n_comp, comp) = disc.mesh.components();
    let s = &disc.space;
    // space nodes inherit the component of their element
    let mut node_comp = vec![usize::MAX; s.num_nodes()];
    for (t, el) in s.elements.iter().enumerate() {
        let c = comp[disc.mesh.triangles[t][0]];
        for &i in el {
            node_comp[i] = c;
        }
    }
    let mut pins = Vec::new();
    for c in 0..n_comp {
        let nodes: Vec<usize> = (0..s.num_nodes()).filter(|&i| node_comp[i] == c).collect();
        if nodes.iter().any(|&i| dirichlet[i]) || nodes.len() < 2 {
            continue;
        }
        let (a, b) = (nodes[0], nodes[1]);
        pins.push(2 * a);
        pins.push(2 * a + 1);
        let d = s.nodes[b] - s.nodes[a];
        pins.push(if d.x.abs() >= d.y.abs() { 2 * b + 1 } else { 2 * b });
    }
    pins
}

/// Minimizes `½ a(u,u) − Σ load·u` subject to the outer condition; floating
/// components are pinned.
pub fn solve_with_load(
    disc: &Arc<Discretization>,
    mat: &ElasticMaterial,
    outer: &OuterCondition,
    load: Option<&[f64]>,
) -> Result<(DisplacementField, SolveStats)> {
    let s = &disc.space;
    let ndof = 2 * s.num_nodes();
    let mut fixed: Vec<Option<f64>> = vec![None; ndof];
    let mut dirichlet = vec![false; s.num_nodes()];
    if let OuterCondition::Dirichlet(bd) = outer {
        for i in 0..s.num_nodes() {
            if s.is_boundary[i] {
                let v = bd.eval(s.nodes[i], s.hint[i]);
                fixed[2 * i] = Some(v.x);
                fixed[2 * i + 1] = Some(v.y);
                dirichlet[i] = true;
            }
        }
    }
    let pins = pinned_components(disc, &dirichlet);
    for &p in &pins {
        fixed[p] = Some(0.0);
    }
    let mut free_index = vec![usize::MAX; ndof];
    let mut n_free = 0;
    for (i, f) in fixed.iter().enumerate() {
        if f.is_none() {
            free_index[i] = n_free;
            n_free += 1;
        }
    }
    let d = elasticity_matrix(mat);
    let mut a = SpdMatrix::new(n_free);
    let mut rhs = vec![0.0; n_free];
    if let Some(f) = load {
        for (i, &fi) in f.iter().enumerate() {
            if free_index[i] != usize::MAX {
                rhs[free_index[i]] += fi;
            }
        }
    }
    for t in 0..disc.mesh.triangles.len() {
        let k = element_stiffness(disc, t, &d);
        let el = &s.elements[t];
        let nd = 2 * el.len();
        let dof = |c: usize| 2 * el[c / 2] + c % 2;
        for i in 0..nd {
            let gi = free_index[dof(i)];
            if gi == usize::MAX {
                continue;
            }
            for j in 0..nd {
                let kij = k[i * nd + j];
                match fixed[dof(j)] {
                    Some(v) => rhs[gi] -= kij * v,
                    None => {
                        let gj = free_index[dof(j)];
                        if gj <= gi {
                            a.add(gi, gj, kij);
                        }
                    }
                }
            }
        }
    }
    let x = a.solve(&[rhs])?.remove(0);
    let mut values = vec![Vec2::zeros(); s.num_nodes()];
    for i in 0..ndof {
        let v = match fixed[i] {
            Some(v) => v,
            None => x[free_index[i]],
        };
        values[i / 2][i % 2] = v;
    }
    let stats = SolveStats {
        nodes: disc.mesh.num_nodes(),
        triangles: disc.mesh.triangles.len(),
        dofs: ndof,
        free_dofs: n_free,
        nonzeros: a.nnz(),
        pinned_components: pins.len(),
    };
    Ok((DisplacementField { disc: disc.clone(), values }, stats))
}

/// Displacement minimizing the elastic energy with `ψ` imposed on the outer
/// boundary and traction-free crack faces.
pub fn solve_dirichlet(disc: &Arc<Discretization>, mat: &ElasticMaterial, bd: &BoundaryData) -> Result<DisplacementField> {
    Ok(solve_with_load(disc, mat, &OuterCondition::Dirichlet(bd.clone()), None)?.0)
}
