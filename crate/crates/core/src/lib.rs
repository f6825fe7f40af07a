//! Systems of set congruences: deduction closures, numerical consistency,
//! finite witnesses in free groups, rotation realizations and the implication
//! lattice between the satisfiability properties.

pub mod closure;
pub mod deduction;
pub mod dsl;
pub mod error;
pub mod finite;
pub mod freegroup;
mod graph;
pub mod lattice;
pub mod lp;
pub mod numeric;
pub mod report;
pub mod scalar;
pub mod setgraph;
pub mod sphere;
pub mod system;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use system::{CongruenceSystem, IndexSet, Mode, Relation, Statement};

/// Exact rational scalar used by default throughout.
pub type Rational = num_rational::BigRational;

/// Exact rotation matrix.
pub type RotMat = sphere::Mat3<Rational>;

/// Exact point of `ℚ³`.
pub type Point = sphere::Vec3<Rational>;
