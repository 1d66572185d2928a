//! Formal calculus: sparse series with rational exponents, the expansion
//! maps, and the delta-function identities.

pub mod checks;
pub mod delta;
pub mod exponent;
pub mod rational_fn;
pub mod series;

pub use checks::{check_delta_identities, check_jacobi_delta, DeltaIdentityReport, IdentityCheck};
pub use delta::{delta_atom_series, delta_series_single, DeltaAtom, DeltaExpression};
pub use exponent::{ExponentVector, X0, X1, X2};
pub use rational_fn::{IotaMap, LinearFactor, RationalFn};
pub use series::{binom_expand, FormalError, Series, SeriesKind};
