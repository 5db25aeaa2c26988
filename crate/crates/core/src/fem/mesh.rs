use super::size::{equidistribute, SizeField, Zone};
use crate::error::{Error, Result};
use crate::geometry::{cross, point_segment_distance, segment_disk_interval, triangle_signed_area, vec2, Vec2};
use crate::model::CrackSet;
use serde::{Deserialize, Serialize};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

/// Polynomial degree of the displacement space.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementOrder {
    #[default]
    P1,
    P2,
}

/// Parameters of the graded disk mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshParams {
    pub radius: f64,
    pub h: f64,
    #[serde(default = "default_grading")]
    pub grading: f64,
    /// Radius below which grading starts; defaults to `radius / 4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading_radius: Option<f64>,
    #[serde(default)]
    pub order: ElementOrder,
    /// Circles about the origin meshed as element edges.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forced_rings: Vec<f64>,
    /// Beyond this radius the size grows linearly with the radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth_radius: Option<f64>,
}

fn default_grading() -> f64 {
    0.5
}

impl MeshParams {
    pub fn new(radius: f64, h: f64, grading: f64) -> Self {
        Self { radius, h, grading, grading_radius: None, order: ElementOrder::P1, forced_rings: Vec::new(), growth_radius: None }
    }

    pub fn with_order(mut self, order: ElementOrder) -> Self {
        self.order = order;
        self
    }

    pub fn grading_radius(&self) -> f64 {
        self.grading_radius.unwrap_or(0.25 * self.radius)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMeshParameter(m));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad(format!("h must be positive, got {}", self.h));
        }
        if !(self.grading > 0.0 && self.grading <= 1.0) {
            return bad(format!("grading must lie in (0, 1], got {}", self.grading));
        }
        let rg = self.grading_radius();
        if !(rg > 0.0 && rg <= self.radius) {
            return bad(format!("grading radius must lie in (0, radius], got {rg}"));
        }
        if self.h > 0.5 * self.radius {
            return bad(format!("h = {} is too coarse for radius {}", self.h, self.radius));
        }
        for &f in &self.forced_rings {
            if !(f > 0.0 && f < self.radius) {
                return bad(format!("forced ring radius {f} must lie in (0, radius)"));
            }
        }
        if let Some(g) = self.growth_radius {
            if !(g > 0.0) {
                return bad(format!("growth radius must be positive, got {g}"));
            }
        }
        Ok(())
    }
}

/// Triangulation before the crack faces are separated.
#[derive(Debug, Clone)]
pub struct MeshGeometry {
    pub points: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    /// Crack edges with the index of the crack set they came from.
    pub crack_edges: Vec<([usize; 2], u32)>,
    /// Outer polygon, counter-clockwise.
    pub boundary: Vec<usize>,
    /// Forced rings, each counter-clockwise.
    pub rings: Vec<(f64, Vec<usize>)>,
    pub origin: usize,
    pub zone_centers: Vec<Vec2>,
    pub params: MeshParams,
}

struct PointSet {
    points: Vec<Vec2>,
    index: HashMap<(i64, i64), usize>,
    quantum: f64,
}

impl PointSet {
    fn new(scale: f64) -> Self {
        Self { points: Vec::new(), index: HashMap::new(), quantum: 1e-11 * scale }
    }

    fn key(&self, p: Vec2) -> (i64, i64) {
        ((p.x / self.quantum).round() as i64, (p.y / self.quantum).round() as i64)
    }

    /// Index of an existing point within one quantum, or a new one.
    fn insert(&mut self, p: Vec2) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&i) = self.index.get(&(kx + dx, ky + dy)) {
                    return i;
                }
            }
        }
        let i = self.points.len();
        self.points.push(p);
        self.index.insert((kx, ky), i);
        i
    }

    fn push_unchecked(&mut self, p: Vec2) -> usize {
        self.points.push(p);
        self.points.len() - 1
    }
}

fn ring_nodes(r: f64, n: usize, offset: f64) -> impl Iterator<Item = Vec2> {
    (0..n).map(move |j| {
        let t = offset + 2.0 * PI * j as f64 / n as f64;
        vec2(r * t.cos(), r * t.sin())
    })
}

fn polar_angle(p: Vec2) -> f64 {
    let t = p.y.atan2(p.x);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Radii between `hi` and `lo` (exclusive) spaced by the size function.
fn ring_radii(hi: f64, lo: f64, s: impl Fn(f64) -> f64) -> Vec<f64> {
    equidistribute(hi - lo, |t| s(hi - t)).into_iter().map(|t| hi - t).collect()
}

/// Graded constrained triangulation of `B_R` with every crack set as
/// constraint edges. Cracks are clipped to the closed disk.
pub fn triangulate(params: &MeshParams, cracks: &[&CrackSet]) -> Result<MeshGeometry> {
    params.validate()?;
    let big_r = params.radius;
    let tol = 1e-9 * big_r;
    let mut size = SizeField::new(params.h, params.grading, params.grading_radius(), params.growth_radius);

    // clipped segments with labels
    let mut segs: Vec<(Vec2, Vec2, u32)> = Vec::new();
    for (label, c) in cracks.iter().enumerate() {
        for (a, b) in c.clip_to_disk(big_r).segments() {
            if (b - a).norm() > tol {
                segs.push((a, b, label as u32));
            }
        }
    }

    // free crack ends become graded zones
    let mut ends: Vec<(Vec2, usize)> = Vec::new();
    for &(a, b, _) in &segs {
        for p in [a, b] {
            match ends.iter_mut().find(|(q, _)| (p - *q).norm() <= tol) {
                Some(e) => e.1 += 1,
                None => ends.push((p, 1)),
            }
        }
    }
    let centers: Vec<Vec2> =
        ends.iter().filter(|(p, d)| *d == 1 && p.norm() > tol && p.norm() < big_r - tol).map(|(p, _)| *p).collect();
    for (i, &c) in centers.iter().enumerate() {
        let mut rho = 0.5 * (big_r - c.norm());
        rho = rho.min(0.5 * c.norm());
        for (j, &d) in centers.iter().enumerate() {
            if i != j {
                rho = rho.min(0.5 * (c - d).norm());
            }
        }
        for &f in &params.forced_rings {
            rho = rho.min(0.5 * (c.norm() - f).abs());
        }
        if rho <= tol {
            return Err(Error::MeshFailure(format!("crack end ({}, {}) is too close to another feature", c.x, c.y)));
        }
        let h = size.origin(c.norm() - rho).min(rho);
        let core = (rho * (h / rho).powi(2)).min(rho);
        size.zones.push(Zone { center: c, radius: rho, h, core });
    }

    let near_crack = |p: Vec2, d: f64| segs.iter().any(|&(a, b, _)| point_segment_distance(p, a, b) < d);
    let mut ps = PointSet::new(big_r);

    // crack nodes; segments are split where they cross forced rings
    let mut crack_edges: Vec<([usize; 2], u32)> = Vec::new();
    for &(a, b, label) in &segs {
        let mut cuts = vec![0.0, 1.0];
        // T-junctions: endpoints of other segments lying on this one
        for &(c, d, _) in &segs {
            for p in [c, d] {
                if point_segment_distance(p, a, b) <= tol {
                    cuts.push((p - a).dot(&(b - a)) / (b - a).norm_squared());
                }
            }
        }
        for &f in &params.forced_rings {
            if let Some((t0, t1)) = segment_disk_interval(a, b, f) {
                for t in [t0, t1] {
                    if t > 1e-12 && t < 1.0 - 1e-12 {
                        cuts.push(t);
                    }
                }
            }
        }
        cuts.retain(|&t| (0.0..=1.0).contains(&t));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
        for w in cuts.windows(2) {
            let (p, q) = (a + (b - a) * w[0], a + (b - a) * w[1]);
            let len = (q - p).norm();
            let dir = (q - p) / len;
            // march from the finer end
            let (start, sgn) = if size.at(p) <= size.at(q) { (p, 1.0) } else { (q, -1.0) };
            let mut ts = equidistribute(len, |t| size.at(start + dir * (sgn * t)));
            if sgn < 0.0 {
                ts = ts.into_iter().rev().map(|t| len - t).collect();
            }
            let mut prev = ps.insert(p);
            for t in ts {
                let i = ps.insert(p + dir * t);
                crack_edges.push(([prev, i], label));
                prev = i;
            }
            let last = ps.insert(q);
            crack_edges.push(([prev, last], label));
        }
    }
    let origin = ps.insert(Vec2::zeros());
    let n_crack = ps.points.len();

    let in_zone = |p: Vec2, s: f64| size.zones.iter().any(|z| (p - z.center).norm() < z.radius + 0.5 * s);

    // origin rings from the boundary inward; forced rings are anchors
    let mut anchors: Vec<f64> = params.forced_rings.clone();
    anchors.push(big_r);
    anchors.sort_by(|a, b| b.total_cmp(a));
    let inner = size.core.max(0.5 * size.origin(size.core));
    let mut radii: Vec<(f64, bool)> = Vec::new();
    for (k, &hi) in anchors.iter().enumerate() {
        let lo = anchors.get(k + 1).copied().unwrap_or(inner);
        radii.push((hi, true));
        radii.extend(ring_radii(hi, lo, |r| size.origin(r)).into_iter().map(|r| (r, false)));
    }
    if inner < *anchors.last().unwrap() {
        radii.push((inner, false));
    }

    let mut boundary: Vec<usize> = Vec::new();
    let mut rings: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &(r, anchor)) in radii.iter().enumerate() {
        let s = size.origin(r);
        let mut n = ((2.0 * PI * r / s).ceil() as usize).max(if k == 0 { 64 } else { 6 });
        // constraint polygons carry nodes at angles 0 and π
        if anchor {
            n += n % 2;
        }
        let offset = if k % 2 == 1 && !anchor { PI / n as f64 } else { 0.0 };
        let mut ids: Vec<usize> = Vec::new();
        for p in ring_nodes(r, n, offset) {
            if near_crack(p, 0.5 * s) || (!anchor && in_zone(p, s)) {
                continue;
            }
            ids.push(ps.push_unchecked(p));
        }
        if anchor {
            for i in 0..n_crack {
                if (ps.points[i].norm() - r).abs() <= tol {
                    ids.push(i);
                }
            }
            ids.sort_by(|&i, &j| polar_angle(ps.points[i]).total_cmp(&polar_angle(ps.points[j])));
            if k == 0 {
                boundary = ids;
            } else {
                rings.push((r, ids));
            }
        }
    }

    // zone rings
    for z in size.zones.clone() {
        let inner = z.core.max(0.5 * size.zone(&z, z.core));
        let mut radii = vec![z.radius];
        radii.extend(ring_radii(z.radius, inner, |d| size.zone(&z, d)));
        radii.push(inner);
        for (k, &r) in radii.iter().enumerate() {
            let s = size.zone(&z, r);
            let n = ((2.0 * PI * r / s).ceil() as usize).max(6);
            let offset = if k % 2 == 1 { PI / n as f64 } else { 0.0 };
            for p in ring_nodes(r, n, offset) {
                let q = z.center + p;
                if !near_crack(q, 0.5 * s) {
                    ps.push_unchecked(q);
                }
            }
        }
    }

    let mut edges: Vec<[usize; 2]> = crack_edges.iter().map(|(e, _)| *e).collect();
    for poly in std::iter::once(&boundary).chain(rings.iter().map(|(_, p)| p)) {
        for k in 0..poly.len() {
            edges.push([poly[k], poly[(k + 1) % poly.len()]]);
        }
    }

    let symmetric = segs.iter().all(|&(a, b, _)| a.y.abs() <= tol && b.y.abs() <= tol);
    let mirrored = if symmetric { mirror_triangulation(&ps.points, &edges, tol)? } else { None };
    let (points, triangles, origin) = match mirrored {
        Some((points, remap, triangles)) => {
            for (e, _) in crack_edges.iter_mut() {
                *e = e.map(|i| remap[i]);
            }
            for i in boundary.iter_mut().chain(rings.iter_mut().flat_map(|(_, p)| p.iter_mut())) {
                *i = remap[*i];
            }
            (points, triangles, remap[origin])
        }
        None => {
            let triangles = constrained_delaunay(&ps.points, &edges)?;
            (ps.points, triangles, origin)
        }
    };
    let geom = MeshGeometry { points, triangles, crack_edges, boundary, rings, origin, zone_centers: centers, params: params.clone() };
    let lookup = geom.edge_lookup();
    for (e, _) in &geom.crack_edges {
        if !lookup.contains_key(&edge_key(e[0], e[1])) {
            return Err(Error::MeshFailure("crack edge missing from the triangulation".into()));
        }
    }
    Ok(geom)
}

fn constrained_delaunay(points: &[Vec2], edges: &[[usize; 2]]) -> Result<Vec<[usize; 3]>> {
    let verts: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p.x, p.y)).collect();
    let mut conflicts = 0usize;
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::try_bulk_load_cdt(verts, edges.to_vec(), |_| conflicts += 1)
        .map_err(|e| Error::MeshFailure(format!("triangulation failed: {e:?}")))?;
    if conflicts > 0 {
        return Err(Error::MeshFailure(format!("{conflicts} intersecting constraint edges")));
    }
    if cdt.num_vertices() != points.len() {
        return Err(Error::MeshFailure("coincident mesh nodes".into()));
    }
    let mut triangles: Vec<[usize; 3]> = Vec::with_capacity(cdt.num_inner_faces());
    for f in cdt.inner_faces() {
        let v = f.vertices().map(|h| h.fix().index());
        let t = if triangle_signed_area(points[v[0]], points[v[1]], points[v[2]]) > 0.0 { v } else { [v[0], v[2], v[1]] };
        if !(triangle_signed_area(points[t[0]], points[t[1]], points[t[2]]) > 0.0) {
            return Err(Error::MeshFailure("degenerate triangle".into()));
        }
        triangles.push(t);
    }
    Ok(triangles)
}

/// Triangulates the closed upper half and reflects it, so that a point set
/// symmetric about the x-axis gets an exactly symmetric mesh. Returns the new
/// points, the old-to-new index map and the triangles, or `None` when the
/// lower points are not mirror images of upper ones.
fn mirror_triangulation(
    points: &[Vec2],
    edges: &[[usize; 2]],
    tol: f64,
) -> Result<Option<(Vec<Vec2>, Vec<usize>, Vec<[usize; 3]>)>> {
    let mut half = PointSet { points: Vec::new(), index: HashMap::new(), quantum: tol };
    let mut remap = vec![usize::MAX; points.len()];
    let mut upper = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if p.y > tol {
            remap[i] = half.push_unchecked(*p);
            half.index.insert(half.key(*p), remap[i]);
            upper.push(remap[i]);
        } else if p.y >= -tol {
            remap[i] = half.push_unchecked(vec2(p.x, 0.0));
        }
    }
    let n_half = half.points.len();
    let mut mirror: Vec<usize> = (0..n_half).collect();
    let mut pts = half.points.clone();
    for &k in &upper {
        mirror[k] = pts.len();
        pts.push(vec2(pts[k].x, -pts[k].y));
    }
    for (i, p) in points.iter().enumerate() {
        if p.y < -tol {
            let q = vec2(p.x, -p.y);
            let (kx, ky) = half.key(q);
            let hit = (-1..=1)
                .flat_map(|dx| (-1..=1).map(move |dy| (kx + dx, ky + dy)))
                .find_map(|k| half.index.get(&k).copied())
                .filter(|&k| (half.points[k] - q).norm() <= tol);
            match hit {
                Some(k) => remap[i] = mirror[k],
                None => return Ok(None),
            }
        }
    }
    let half_edges: Vec<[usize; 2]> =
        edges.iter().map(|e| e.map(|i| remap[i])).filter(|e| e[0] < n_half && e[1] < n_half).collect();
    let mut triangles = constrained_delaunay(&pts[..n_half], &half_edges)?;
    let reflected: Vec<[usize; 3]> = triangles.iter().map(|t| [mirror[t[0]], mirror[t[2]], mirror[t[1]]]).collect();
    triangles.extend(reflected);
    Ok(Some((pts, remap, triangles)))
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl MeshGeometry {
    /// Edge → adjacent (triangle, local edge) pairs.
    pub(crate) fn edge_lookup(&self) -> HashMap<(usize, usize), Vec<(usize, usize)>> {
        let mut m: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::with_capacity(3 * self.triangles.len() / 2 + 8);
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                m.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default().push((t, k));
            }
        }
        m
    }
}

/// One side of a crack edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrackFace {
    pub nodes: [usize; 2],
    pub triangle: usize,
    pub label: u32,
}

/// Triangulation of `B_R ∖ Γ` with duplicated crack-face nodes.
#[derive(Debug, Clone)]
pub struct CrackMesh {
    pub vertices: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    /// Vertex of the unopened triangulation each node copies.
    pub parent: Vec<usize>,
    /// Unit direction into the material of each node's triangle fan.
    pub hint: Vec<Vec2>,
    /// `(left, right)` twins relative to the crack direction; `(lower, upper)`
    /// on Σ₀.
    pub crack_pairs: Vec<(usize, usize)>,
    pub tip_index: usize,
    pub boundary_nodes: Vec<usize>,
    pub is_boundary: Vec<bool>,
    /// Outer polygon edges, counter-clockwise, in node indices.
    pub boundary_edges: Vec<[usize; 2]>,
    pub crack_faces: Vec<CrackFace>,
    /// Forced rings: radius and counter-clockwise edges seen from inside.
    pub rings: Vec<(f64, Vec<[usize; 2]>)>,
    pub radius: f64,
    pub h: f64,
    pub grading: f64,
    pub order: ElementOrder,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

impl CrackMesh {
    /// Separates the faces of the crack edges whose label passes `open`.
    pub fn open(geom: &MeshGeometry, open: impl Fn(u32) -> bool) -> Result<CrackMesh> {
        let np = geom.points.len();
        let nt = geom.triangles.len();
        let cut: HashMap<(usize, usize), u32> =
            geom.crack_edges.iter().filter(|(_, l)| open(*l)).map(|(e, l)| (edge_key(e[0], e[1]), *l)).collect();

        // incident (vertex, neighbour, triangle, corner) records
        let mut inc: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(6 * nt);
        for (t, tri) in geom.triangles.iter().enumerate() {
            for k in 0..3 {
                let v = tri[k];
                inc.push((v, tri[(k + 1) % 3], t, k));
                inc.push((v, tri[(k + 2) % 3], t, k));
            }
        }
        inc.sort_unstable();
        // corner id = 3t + k
        let mut uf = UnionFind((0..3 * nt).collect());
        for w in inc.windows(2) {
            let (v0, n0, t0, k0) = w[0];
            let (v1, n1, t1, k1) = w[1];
            if v0 == v1 && n0 == n1 && !cut.contains_key(&edge_key(v0, n0)) {
                uf.union(3 * t0 + k0, 3 * t1 + k1);
            }
        }
        // groups per vertex, ordered by smallest corner id
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); np];
        for c in 0..3 * nt {
            let r = uf.find(c);
            let v = geom.triangles[c / 3][c % 3];
            if !groups[v].contains(&r) {
                groups[v].push(r);
            }
        }
        let mut node_of_root: HashMap<usize, usize> = HashMap::new();
        let mut parent: Vec<usize> = (0..np).collect();
        for (v, g) in groups.iter().enumerate() {
            for (j, &r) in g.iter().enumerate() {
                if j == 0 {
                    node_of_root.insert(r, v);
                } else {
                    node_of_root.insert(r, parent.len());
                    parent.push(v);
                }
            }
        }
        let vertices: Vec<Vec2> = parent.iter().map(|&v| geom.points[v]).collect();
        let triangles: Vec<[usize; 3]> = (0..nt).map(|t| [0, 1, 2].map(|k| node_of_root[&uf.find(3 * t + k)])).collect();

        let mut hint = vec![Vec2::zeros(); parent.len()];
        for tri in &triangles {
            let c = (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
            for &n in tri {
                let d = c - vertices[n];
                hint[n] += d / d.norm();
            }
        }
        for d in hint.iter_mut() {
            let n = d.norm();
            if n > 0.0 {
                *d /= n;
            }
        }

        let lookup = geom.edge_lookup();
        let local = |t: usize, a: usize, b: usize| -> [usize; 2] {
            let tri = geom.triangles[t];
            let pos = |v: usize| tri.iter().position(|&x| x == v).expect("edge vertex in triangle");
            [triangles[t][pos(a)], triangles[t][pos(b)]]
        };

        let mut crack_faces = Vec::new();
        let mut pair_set: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for (e, label) in &geom.crack_edges {
            if !open(*label) {
                continue;
            }
            let (a, b) = (geom.points[e[0]], geom.points[e[1]]);
            for &(t, _) in &lookup[&edge_key(e[0], e[1])] {
                let nodes = local(t, e[0], e[1]);
                crack_faces.push(CrackFace { nodes, triangle: t, label: *label });
                let tri = &triangles[t];
                let c = (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
                let left = cross(b - a, c - a) > 0.0;
                for (k, &v) in e.iter().enumerate() {
                    if groups[v].len() == 2 {
                        let entry = pair_set.entry(v).or_insert((usize::MAX, usize::MAX));
                        if left {
                            entry.0 = nodes[k];
                        } else {
                            entry.1 = nodes[k];
                        }
                    }
                }
            }
        }
        let crack_pairs: Vec<(usize, usize)> =
            pair_set.values().filter(|(l, r)| *l != usize::MAX && *r != usize::MAX && l != r).copied().collect();

        let mut is_boundary = vec![false; parent.len()];
        let mut boundary_edges = Vec::new();
        let poly_edges = |poly: &[usize], inside: bool| -> Vec<[usize; 2]> {
            (0..poly.len())
                .map(|k| {
                    let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
                    let adj = &lookup[&edge_key(a, b)];
                    let pick = adj
                        .iter()
                        .find(|&&(t, _)| {
                            let tri = geom.triangles[t];
                            let c = (geom.points[tri[0]] + geom.points[tri[1]] + geom.points[tri[2]]) / 3.0;
                            (cross(geom.points[b] - geom.points[a], c - geom.points[a]) > 0.0) == inside
                        })
                        .or(adj.first())
                        .expect("polygon edge in triangulation");
                    local(pick.0, a, b)
                })
                .collect()
        };
        for e in poly_edges(&geom.boundary, true) {
            is_boundary[e[0]] = true;
            is_boundary[e[1]] = true;
            boundary_edges.push(e);
        }
        let boundary_nodes: Vec<usize> = (0..parent.len()).filter(|&i| is_boundary[i]).collect();
        let rings = geom.rings.iter().map(|(r, poly)| (*r, poly_edges(poly, true))).collect();

        Ok(CrackMesh {
            vertices,
            triangles,
            parent,
            hint,
            crack_pairs,
            tip_index: geom.origin,
            boundary_nodes,
            is_boundary,
            boundary_edges,
            crack_faces,
            rings,
            radius: geom.params.radius,
            h: geom.params.h,
            grading: geom.params.grading,
            order: geom.params.order,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        triangle_signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn centroid(&self, t: usize) -> Vec2 {
        let [a, b, c] = self.triangles[t];
        (self.vertices[a] + self.vertices[b] + self.vertices[c]) / 3.0
    }

    /// Number of distinct edges of the opened mesh.
    pub fn num_edges(&self) -> usize {
        let mut e: Vec<(usize, usize)> =
            self.triangles.iter().flat_map(|t| (0..3).map(move |k| edge_key(t[k], t[(k + 1) % 3]))).collect();
        e.sort_unstable();
        e.dedup();
        e.len()
    }

    /// Connected components of the element graph, as a component id per node.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind((0..self.num_nodes()).collect());
        for t in &self.triangles {
            uf.union(t[0], t[1]);
            uf.union(t[1], t[2]);
        }
        let mut ids = HashMap::new();
        let mut comp = vec![0; self.num_nodes()];
        for (i, c) in comp.iter_mut().enumerate() {
            let r = uf.find(i);
            let n = ids.len();
            *c = *ids.entry(r).or_insert(n);
        }
        (ids.len(), comp)
    }
}

/// Mesh of `B_R ∖ Γ` with every crack edge opened.
pub fn build_disk_mesh(params: &MeshParams, crack: &CrackSet) -> Result<CrackMesh> {
    let geom = triangulate(params, &[crack])?;
    CrackMesh::open(&geom, |_| true)
}
