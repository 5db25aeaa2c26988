use super::field::{DisplacementField, StressField};
use super::mesh::{edge_key, CrackMesh};
use crate::error::{Error, Result};
use crate::geometry::{vec2, Vec2};
use crate::quadrature::gauss_legendre_interval;
use std::collections::HashMap;
use std::io::{self, Write};

/// Terms of the integration-by-parts identity on `Ω ∖ B_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBalance {
    /// `∫_{Ω∖B_r} σ:e(v)`.
    pub volume: f64,
    /// `∫_{∂B_r} (σν)·v` with `ν` the outward normal of `B_r`.
    pub boundary: f64,
    /// `∫_{Ω∖B_r} |σ||e(v)|`, the scale of the residual.
    pub scale: f64,
    pub residual: f64,
}

/// Checks `∫_{Ω∖B_r} σ:e(v) = −∫_{∂B_r∖Γ}(σν)·v` for a test field vanishing on
/// the outer boundary. `B_r` is approximated by the elements whose centroid
/// lies inside it, so the circle becomes the polyline separating them.
pub fn flux_balance_check(stress: &StressField, v: &DisplacementField, r: f64) -> Result<FluxBalance> {
    let m: &CrackMesh = &stress.disc.mesh;
    if !std::sync::Arc::ptr_eq(&stress.disc, &v.disc) {
        return Err(Error::InvalidArgument("stress and test field live on different meshes".into()));
    }
    if !(r > 0.0 && r < m.radius) {
        return Err(Error::RadiusOutsideMesh(r));
    }
    let inside: Vec<bool> = (0..m.triangles.len()).map(|t| m.centroid(t).norm() < r).collect();
    let mut volume = 0.0;
    let mut scale = 0.0;
    for t in 0..m.triangles.len() {
        if !inside[t] {
            let e = v.strain_in(t, [1.0 / 3.0; 3]);
            let a = m.area(t);
            // strain of P2 test fields is linear: integrate σ:e exactly
            let ev = match v.disc.order() {
                super::ElementOrder::P1 => e,
                super::ElementOrder::P2 => {
                    crate::quadrature::TRI3.iter().fold(crate::model::SymTensor2::ZERO, |acc, (l, w)| acc + v.strain_in(t, *l) * *w)
                }
            };
            volume += a * stress.values[t].ddot(&ev);
            scale += a * stress.values[t].norm() * ev.norm();
        }
    }
    let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (t, tri) in m.triangles.iter().enumerate() {
        for k in 0..3 {
            edges.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default().push((t, k));
        }
    }
    let gauss = gauss_legendre_interval(3, 0.0, 1.0);
    let mut keys: Vec<_> = edges.keys().copied().collect();
    keys.sort_unstable();
    let mut boundary = 0.0;
    for key in keys {
        let adj = &edges[&key];
        if adj.len() != 2 || inside[adj[0].0] == inside[adj[1].0] {
            continue;
        }
        let (tin, k) = if inside[adj[0].0] { adj[0] } else { adj[1] };
        let tout = if inside[adj[0].0] { adj[1].0 } else { adj[0].0 };
        let tri = m.triangles[tin];
        let (a, b) = (m.vertices[tri[k]], m.vertices[tri[(k + 1) % 3]]);
        // counter-clockwise triangle: outward normal is the right-hand normal
        let d = b - a;
        let nu = vec2(d.y, -d.x) / d.norm();
        let sn = stress.values[tout].mul_vec(nu);
        let simplex = stress.disc.simplex(tout);
        for &(s, w) in &gauss {
            let x: Vec2 = a + d * s;
            boundary += w * d.norm() * sn.dot(&v.eval_in(tout, simplex.barycentric(x)));
        }
    }
    Ok(FluxBalance { volume, boundary, scale, residual: (volume + boundary).abs() })
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Legacy ASCII VTK unstructured grid with optional vertex displacement,
/// element stress and vertex scalars.
pub fn write_vtk(
    w: &mut impl Write,
    mesh: &CrackMesh,
    displacement: Option<&DisplacementField>,
    stress: Option<&StressField>,
    scalars: &[(&str, &[f64])],
) -> io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "cracktip")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", mesh.num_nodes())?;
    for p in &mesh.vertices {
        writeln!(w, "{} {} 0", fmt(p.x), fmt(p.y))?;
    }
    let nt = mesh.triangles.len();
    writeln!(w, "CELLS {} {}", nt, 4 * nt)?;
    for t in &mesh.triangles {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    writeln!(w, "CELL_TYPES {nt}")?;
    for _ in 0..nt {
        writeln!(w, "5")?;
    }
    if displacement.is_some() || !scalars.is_empty() {
        writeln!(w, "POINT_DATA {}", mesh.num_nodes())?;
    }
    if let Some(u) = displacement {
        writeln!(w, "VECTORS displacement double")?;
        for v in &u.values[..mesh.num_nodes()] {
            writeln!(w, "{} {} 0", fmt(v.x), fmt(v.y))?;
        }
    }
    for (name, vals) in scalars {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for v in &vals[..mesh.num_nodes()] {
            writeln!(w, "{}", fmt(*v))?;
        }
    }
    if let Some(s) = stress {
        writeln!(w, "CELL_DATA {nt}")?;
        writeln!(w, "TENSORS stress double")?;
        for t in &s.values {
            writeln!(w, "{} {} 0\n{} {} 0\n0 0 0\n", fmt(t.xx), fmt(t.xy), fmt(t.xy), fmt(t.yy))?;
        }
    }
    Ok(())
}
