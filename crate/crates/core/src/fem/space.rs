use super::mesh::{edge_key, CrackMesh, ElementOrder};
use crate::geometry::{vec2, Vec2};
use std::collections::HashMap;

/// Lagrange nodes of the displacement space on an opened mesh. Nodes
/// `0..mesh.num_nodes()` are the mesh vertices; P2 appends one node per edge.
#[derive(Debug, Clone)]
pub struct FeSpace {
    pub order: ElementOrder,
    pub nodes: Vec<Vec2>,
    pub hint: Vec<Vec2>,
    pub is_boundary: Vec<bool>,
    /// 3 (P1) or 6 (P2: vertices, then edges 01, 12, 20) nodes per triangle.
    pub elements: Vec<Vec<usize>>,
}

impl FeSpace {
    pub fn new(mesh: &CrackMesh, order: ElementOrder) -> Self {
        let mut nodes = mesh.vertices.clone();
        let mut hint = mesh.hint.clone();
        let mut is_boundary = mesh.is_boundary.clone();
        let mut elements: Vec<Vec<usize>> = mesh.triangles.iter().map(|t| t.to_vec()).collect();
        if order == ElementOrder::P2 {
            let boundary_edges: std::collections::HashSet<(usize, usize)> =
                mesh.boundary_edges.iter().map(|e| edge_key(e[0], e[1])).collect();
            let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
            for el in elements.iter_mut() {
                let t = [el[0], el[1], el[2]];
                for k in 0..3 {
                    let key = edge_key(t[k], t[(k + 1) % 3]);
                    let id = *mid.entry(key).or_insert_with(|| {
                        nodes.push((mesh.vertices[key.0] + mesh.vertices[key.1]) * 0.5);
                        let h = mesh.hint[key.0] + mesh.hint[key.1];
                        hint.push(if h.norm() > 0.0 { h / h.norm() } else { h });
                        is_boundary.push(boundary_edges.contains(&key));
                        nodes.len() - 1
                    });
                    el.push(id);
                }
            }
        }
        Self { order, nodes, hint, is_boundary, elements }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes_per_element(&self) -> usize {
        match self.order {
            ElementOrder::P1 => 3,
            ElementOrder::P2 => 6,
        }
    }
}

/// Barycentric gradients and area of a triangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Simplex {
    pub v: [Vec2; 3],
    pub area: f64,
    pub grad: [Vec2; 3],
}

impl Simplex {
    pub fn new(v: [Vec2; 3]) -> Self {
        let area = 0.5 * ((v[1] - v[0]).perp(&(v[2] - v[0])));
        let grad = [0, 1, 2].map(|i| {
            let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
            vec2(a.y - b.y, b.x - a.x) / (2.0 * area)
        });
        Self { v, area, grad }
    }

    pub fn barycentric(&self, x: Vec2) -> [f64; 3] {
        let l1 = self.grad[1].dot(&(x - self.v[0]));
        let l2 = self.grad[2].dot(&(x - self.v[0]));
        [1.0 - l1 - l2, l1, l2]
    }

    #[cfg(test)]
    pub fn point(&self, l: [f64; 3]) -> Vec2 {
        self.v[0] * l[0] + self.v[1] * l[1] + self.v[2] * l[2]
    }
}

/// Shape function values at barycentric point `l`.
pub(crate) fn shape_values(order: ElementOrder, l: [f64; 3]) -> Vec<f64> {
    match order {
        ElementOrder::P1 => l.to_vec(),
        ElementOrder::P2 => {
            let mut v: Vec<f64> = l.iter().map(|&a| a * (2.0 * a - 1.0)).collect();
            for k in 0..3 {
                v.push(4.0 * l[k] * l[(k + 1) % 3]);
            }
            v
        }
    }
}

/// Shape function gradients at barycentric point `l`.
pub(crate) fn shape_gradients(order: ElementOrder, s: &Simplex, l: [f64; 3]) -> Vec<Vec2> {
    match order {
        ElementOrder::P1 => s.grad.to_vec(),
        ElementOrder::P2 => {
            let mut g: Vec<Vec2> = (0..3).map(|i| s.grad[i] * (4.0 * l[i] - 1.0)).collect();
            for k in 0..3 {
                let j = (k + 1) % 3;
                g.push((s.grad[j] * l[k] + s.grad[k] * l[j]) * 4.0);
            }
            g
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::TRI3;
    use approx::assert_relative_eq;

    #[test]
    fn p2_shapes_reproduce_quadratics() {
        let s = Simplex::new([vec2(0.1, 0.2), vec2(1.3, -0.1), vec2(0.4, 0.9)]);
        let f = |p: Vec2| 1.0 + 2.0 * p.x - p.y + 0.5 * p.x * p.x + 3.0 * p.x * p.y - p.y * p.y;
        let df = |p: Vec2| vec2(2.0 + p.x + 3.0 * p.y, -1.0 + 3.0 * p.x - 2.0 * p.y);
        let nodes: Vec<Vec2> = vec![
            s.v[0],
            s.v[1],
            s.v[2],
            (s.v[0] + s.v[1]) * 0.5,
            (s.v[1] + s.v[2]) * 0.5,
            (s.v[2] + s.v[0]) * 0.5,
        ];
        for l in [[0.2, 0.3, 0.5], [0.6, 0.1, 0.3]] {
            let x = s.point(l);
            let v: f64 = shape_values(ElementOrder::P2, l).iter().zip(&nodes).map(|(n, p)| n * f(*p)).sum();
            let g: Vec2 =
                shape_gradients(ElementOrder::P2, &s, l).iter().zip(&nodes).map(|(n, p)| n * f(*p)).sum();
            assert_relative_eq!(v, f(x), epsilon = 1e-13);
            assert_relative_eq!(g, df(x), epsilon = 1e-12);
        }
        let total: f64 = TRI3.iter().map(|(l, w)| w * shape_values(ElementOrder::P2, *l).iter().sum::<f64>()).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn barycentric_round_trip() {
        let s = Simplex::new([vec2(0.0, 0.0), vec2(2.0, 0.0), vec2(0.0, 1.0)]);
        assert_relative_eq!(s.area, 1.0);
        let l = s.barycentric(vec2(0.5, 0.25));
        assert_relative_eq!(s.point(l), vec2(0.5, 0.25), epsilon = 1e-15);
    }
}
