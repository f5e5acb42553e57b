//! Ramsey numbers of double stars: exact search at small scale, the
//! blow-up constructions behind the lower bounds, and exact evaluation of
//! the asymptotic bound functions.
//!
//! Closed-form bound and family functions are generic over [`Scalar`];
//! [`Rational`] is the exact instantiation used for certificates and
//! tables, [`Real`] the floating one used for plotting.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod plot;
pub mod ramsey;
pub mod rng;
pub mod scalar;
pub mod validity;

pub use error::{Error, Result};
pub use graph::{DeltaEtaProfile, Graph};
pub use ramsey::{DoubleStar, EdgeColoring};
pub use scalar::Scalar;

/// Exact scalar.
pub type Rational = num_rational::BigRational;

/// Floating scalar.
pub type Real = f64;

/// A `(delta, eta)` pair in exact arithmetic.
pub type Profile = DeltaEtaProfile<Rational>;
