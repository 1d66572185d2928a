//! Exact symbolic verification engine for braided intertwining-operator
//! models: formal delta calculus, branched multivalued functions with anchor
//! tracking, fusing/braiding matrices with their hexagon relations, and the
//! S3 family of Jacobi-identity checks.
//!
//! The whole engine is generic over the coefficient [`scalar::Scalar`]:
//! exact runs use cyclotomic numbers, float runs use `Complex64`.

pub mod branched;
pub mod cyclotomic;
pub mod formal;
pub mod jacobi;
pub mod model;
pub mod moore_seiberg;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod suites;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, ScalarError};
pub use rational::Rational;
pub use scalar::{Scalar, ScalarRepr};

/// Exact-mode scalar type.
pub type ExactScalar = Cyclotomic;
/// Float-mode scalar type.
pub type FloatScalar = num_complex::Complex64;

pub type ExactSeries = formal::Series<ExactScalar>;
pub type FloatSeries = formal::Series<FloatScalar>;
pub type ExactGFunction = branched::GFunction<ExactScalar>;
pub type FloatGFunction = branched::GFunction<FloatScalar>;
