//! Crack-conforming finite elements for the planar Lamé system.

mod field;
mod linalg;
mod locate;
mod mesh;
mod post;
mod size;
mod solve;
mod space;

pub use field::{Discretization, DisplacementField, StressField};
pub use mesh::{build_disk_mesh, triangulate, CrackFace, CrackMesh, ElementOrder, MeshGeometry, MeshParams};
pub use post::{flux_balance_check, write_vtk, FluxBalance};
pub use solve::{solve_dirichlet, solve_with_load, BoundaryData, OuterCondition, SolveStats};
pub use space::FeSpace;

pub(crate) use linalg::SpdMatrix;
