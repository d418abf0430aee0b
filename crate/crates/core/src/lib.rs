//! Multiresolution triangular plate-bending elements.
//!
//! Each element carries a uniform lattice of `(m+1)(m+2)/2` nodes whose basis
//! functions are scaled and shifted copies of one full-node BCIZ function on a
//! hexagonal support. Elements are assembled into a global Kirchhoff plate
//! model, solved, and post-processed for deflections and moments.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.
//!
//! ```
//! use mrplate::{assemble, apply_boundary_conditions, solve_system, field_eval};
//! use mrplate::{BoundaryKind, ElementSpec, Model, PlateMaterial, Point};
//!
//! let p = Point::new;
//! let model = Model::new(
//!     vec![
//!         ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], m: 4 },
//!         ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], m: 4 },
//!     ],
//!     PlateMaterial::unit_rigidity(0.3).unwrap(),
//! )
//! .with_uniform_load(1.0)
//! .with_bc(p(0.0, 0.0), p(1.0, 0.0), BoundaryKind::Clamped)
//! .with_bc(p(1.0, 0.0), p(1.0, 1.0), BoundaryKind::Clamped)
//! .with_bc(p(1.0, 1.0), p(0.0, 1.0), BoundaryKind::Clamped)
//! .with_bc(p(0.0, 1.0), p(0.0, 0.0), BoundaryKind::Clamped);
//!
//! let reduced = apply_boundary_conditions(&assemble(&model).unwrap(), &model.bcs).unwrap();
//! let solution = solve_system(&reduced).unwrap();
//! let centre = field_eval(&solution, p(0.5, 0.5)).unwrap();
//! assert!(centre.w > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod bench;
pub mod dense;
pub mod element;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod shapefn;
pub mod solve;
pub mod sparse;

pub use assembly::{
    apply_boundary_conditions, assemble, BoundaryCondition, BoundaryKind, ElementSpec, GlobalSystem, Model, PointLoad,
    ReducedSystem,
};
pub use element::{MRElement, PlateMaterial};
pub use error::{Error, Result};
pub use geometry::{LocalFrame, NodeIndex, Point2};
pub use scalar::Scalar;
pub use solve::{field_eval, moment_eval, solve_system, FieldValue, MomentTriple, Solution};

pub type Point = Point2<f64>;
pub type Frame = LocalFrame<f64>;
pub type Material = PlateMaterial<f64>;
pub type Element = MRElement<f64>;
pub type PlateModel = Model<f64>;
pub type System = GlobalSystem<f64>;
pub type Reduced = ReducedSystem<f64>;
pub type Moments = MomentTriple<f64>;
pub type Field = FieldValue<f64>;
