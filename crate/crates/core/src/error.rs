use thiserror::Error;

/// Everything that can go wrong while building, assembling or solving a plate model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("triangle vertices are collinear (area {area:e} below tolerance {tolerance:e})")]
    CollinearVertices { area: f64, tolerance: f64 },
    #[error("no cyclic vertex labeling gives a local frame with b >= h")]
    NoValidLabeling,
    #[error("node index (r={r}, s={s}) is outside the grid of scale m={m}")]
    IndexOutOfGrid { m: usize, r: usize, s: usize },
    #[error("scale m must be a positive integer")]
    InvalidScale,
    #[error("point ({x}, {y}) does not lie in the requested hexagon sub-domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("point ({x}, {y}) lies outside the element")]
    OutsideElement { x: f64, y: f64 },
    #[error("point ({x}, {y}) lies outside every element of the model")]
    OutsideModel { x: f64, y: f64 },
    #[error("degenerate quadrature cell (area {area:e})")]
    QuadratureFailure { area: f64 },
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("node grids of elements {first} and {second} do not coincide along their shared edge")]
    NodeMismatch { first: usize, second: usize },
    #[error("boundary condition {index} matches no model node")]
    EmptyEdge { index: usize },
    #[error("stiffness matrix is singular at equation {equation} (insufficient constraints)")]
    SingularSystem { equation: usize },
    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("cannot normalize: {0} is zero")]
    DivisionByZero(&'static str),
    #[error("mono and multiresolution node sets differ: {0}")]
    PermutationNotFound(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
