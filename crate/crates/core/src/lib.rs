//! Expected area of a random triangle in a rectangle, in a square and on the
//! boundary of the unit square, computed by three independent routes:
//! nested quadrature over a sign-constant case decomposition, seeded
//! Monte-Carlo estimation, and exact enumeration over a boundary lattice.
//!
//! The numeric core is generic over the scalar type; the aliases below fix
//! the common instantiations.

pub mod frame;
pub mod geometry;
pub mod lattice;
pub mod montecarlo;
pub mod quadrature;
pub mod regions;
pub mod scalar;
pub mod stats;

pub use geometry::{Orientation, Point2, Point3};
pub use quadrature::{QuadConfig, QuadError};
pub use regions::{RegionResult, RegionSpec};
pub use scalar::{Real, Scalar};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Point2f = Point2<f64>;
pub type Point3f = Point3<f64>;
pub type RectDomainF = geometry::RectDomain<f64>;
pub type CubeDomainF = geometry::CubeDomain<f64>;
pub type QuadConfigF = QuadConfig<f64>;
pub type RegionSpecF = RegionSpec<f64>;
pub type RegionResultF = RegionResult<f64>;
pub type EstimateResultF = montecarlo::EstimateResult<f64>;
pub type ProblemF = montecarlo::Problem<f64>;
pub type Point2Q = Point2<Rational>;

/// Crate version, stamped into run records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
