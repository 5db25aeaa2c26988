use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid material (lambda={lambda}, mu={mu}): both moduli must be positive and finite")]
    InvalidMaterial { lambda: f64, mu: f64 },
    #[error("empty point set")]
    EmptySet,
    #[error("degenerate crack: {0}")]
    DegenerateCrack(String),
    #[error("crack does not meet the ball of radius {0}")]
    CrackMissesBall(f64),
    #[error("invalid mesh parameter: {0}")]
    InvalidMeshParameter(String),
    #[error("mesh generation failed: {0}")]
    MeshFailure(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("point ({x}, {y}) lies outside the mesh")]
    PointOutsideDomain { x: f64, y: f64 },
    #[error("under-determined fit: {samples} equations for {unknowns} unknowns")]
    Underdetermined { samples: usize, unknowns: usize },
    #[error("radius {0} lies outside the mesh")]
    RadiusOutsideMesh(f64),
    #[error("circle of radius {0} does not meet the crack")]
    CircleMissesCrack(f64),
    #[error("exponent {0} lies in the degenerate guard zone of the plain basis")]
    DegenerateExponent(f64),
    #[error("exponent {0} is not a root of the characteristic matrix")]
    NotARoot(f64),
    #[error("increment is not connected to the crack tip")]
    DisconnectedIncrement,
    #[error("increment touches the circle of radius {0}")]
    IncrementTouchesBoundary(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
