//! Material law, crack geometry and rigid motions.

mod crack;
mod material;
mod rigid;
mod tensor;

pub use crack::{hausdorff_distance, CrackSet};
pub use material::ElasticMaterial;
pub use rigid::RigidMotion;
pub use tensor::SymTensor2;
pub(crate) use crack::golden_section;
