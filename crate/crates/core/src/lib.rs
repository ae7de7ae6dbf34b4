//! Symbolic calculus for almost-cosymplectic-contact structures, their dual
//! almost-coPoisson-Jacobi pairs, symmetry generators and the associated
//! Lie algebroid.
//!
//! Scalar fields are exact [`Expr`] trees; evaluation and the linear solvers
//! are generic over [`Scalar`], so the same code runs on exact rationals and
//! on `f64`/`f32`.

pub mod algebroid;
pub mod chart;
pub mod corpus;
pub mod duality;
pub mod exterior;
pub mod fixtures;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod suite;
pub mod symalg;
pub mod symexpr;

pub use chart::{Chart, ChartError};
pub use scalar::{ExactPoint, FloatPoint, Point, Scalar};
pub use symexpr::{parse_expr, Expr, ExprClass, ZeroPolicy};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
