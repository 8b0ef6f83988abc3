//! Collective canalization of Boolean functions.
//!
//! Functions are stored as bit-packed truth tables ([`TruthTable`]) with
//! variable `x1` as the least-significant bit of the row index. On top of
//! that representation the crate computes:
//!
//! * canalizing variables and the unique layer decomposition
//!   ([`canalization::layer_structure`]),
//! * the exact k-set canalizing proportions `P_0..P_n` and the canalizing
//!   strength ([`canalization::profile`]), plus a Monte Carlo estimator for
//!   arities past the enumeration cap,
//! * pointwise and average sensitivity together with the bounds relating it to
//!   `P_{n-k}` ([`sensitivity`]),
//! * closed-form expectations for p-biased random functions and a sampler to
//!   check them ([`ensemble`]),
//! * exhaustive sweeps over every function of arity at most four ([`sweep`]).
//!
//! Numeric results are generic over a [`Scalar`]: the exact path uses
//! [`Rational`] while `f32`/`f64` are available for quick floating-point
//! summaries. Closed forms that need logarithms or roots are generic over
//! [`Real`].

pub mod canalization;
pub mod decimal;
pub mod ensemble;
mod error;
pub mod expr;
pub mod generate;
pub mod scalar;
pub mod sensitivity;
pub mod sweep;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};
pub use table::{PartialAssignment, TruthTable, MAX_EXACT_ARITY};

/// Exact rational used for every proportion, strength and sensitivity value.
pub type Rational = num_rational::BigRational;

/// Canalization profile with exact rational proportions.
pub type ExactProfile = canalization::CanalizationProfile<Rational>;
/// Canalization profile with `f64` proportions.
pub type Profile64 = canalization::CanalizationProfile<f64>;
/// Canalization profile with `f32` proportions.
pub type Profile32 = canalization::CanalizationProfile<f32>;
