use super::mesh::CrackMesh;
use super::space::Simplex;
use crate::geometry::Vec2;

/// Uniform bucket grid over triangle bounding boxes.
#[derive(Debug, Clone)]
pub(crate) struct Locator {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    pub fn new(mesh: &CrackMesh) -> Self {
        let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
        for v in &mesh.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        let nt = mesh.triangles.len().max(1);
        let span = (hi - lo).max().max(1e-300);
        let nside = ((nt as f64).sqrt().ceil() as usize).clamp(1, 2048);
        let cell = span / nside as f64 * (1.0 + 1e-12);
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).max(1);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        let mut loc = Self { origin: lo, cell, nx, ny, buckets: Vec::new() };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let ps = tri.map(|i| mesh.vertices[i]);
            let (a, b) = (ps[0].inf(&ps[1]).inf(&ps[2]), ps[0].sup(&ps[1]).sup(&ps[2]));
            let (i0, j0) = loc.cell_of(a);
            let (i1, j1) = loc.cell_of(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t as u32);
                }
            }
        }
        loc.buckets = buckets;
        loc
    }

    fn cell_of(&self, x: Vec2) -> (usize, usize) {
        let i = ((x.x - self.origin.x) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((x.y - self.origin.y) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Triangle containing `x` with its barycentric coordinates. Among
    /// triangles touching `x` the one lying furthest along `hint` wins, which
    /// selects a crack face.
    pub fn locate(&self, mesh: &CrackMesh, x: Vec2, hint: Vec2) -> Option<(usize, [f64; 3])> {
        let (i, j) = self.cell_of(x);
        let tol = 1e-10;
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &t in &self.buckets[j * self.nx + i] {
            let t = t as usize;
            let tri = mesh.triangles[t];
            let s = Simplex::new(tri.map(|k| mesh.vertices[k]));
            let l = s.barycentric(x);
            if l.iter().all(|&a| a >= -tol) {
                let score = (mesh.centroid(t) - x).dot(&hint);
                if best.as_ref().is_none_or(|b| score > b.2) {
                    best = Some((t, l, score));
                }
            }
        }
        best.map(|(t, l, _)| (t, l.map(|a| a.max(0.0))))
    }
}
