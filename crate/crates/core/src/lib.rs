//! Z2^n-graded commutative algebras with polynomial or symbolic
//! coefficients, multi-form calculus on flat charts, and covariant
//! derivatives and curvature on curved charts.

pub mod algebra;
pub mod expr;
pub mod geometry;
pub mod grading;
pub mod harness;
pub mod multiform;
pub mod operator;
pub mod random;
pub mod scalar;

pub use algebra::{Algebra, GradedElement, Monomial, Sector, SectorId};
pub use expr::Expr;
pub use grading::Degree;
pub use scalar::Rational;

/// Elements with symbolic coefficients, the default for chart calculus.
pub type BiForm = GradedElement<Expr>;
/// Elements with exact rational coefficients.
pub type ExactElement = GradedElement<Rational>;
/// Elements with double-precision coefficients.
pub type NumericElement = GradedElement<f64>;
/// Elements with single-precision coefficients.
pub type SingleElement = GradedElement<f32>;
