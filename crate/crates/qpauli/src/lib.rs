//! Exact Haar-state moments of the quantum permutation algebra `A_s(4)`,
//! computed through two independent pipelines and verified equal.
//!
//! The crate implements:
//!
//! - the Pauli sign algebra and the model projections `pi_ij(x)` over the
//!   unit sphere ([`pauli`]);
//! - non-crossing partitions with Kreweras complements ([`nc`]) and the
//!   Weingarten (inverse Gram) machinery they feed ([`weingarten`]);
//! - exact tensor calculus for the cyclic map `R` and the fixed-point
//!   expectation `E`, built two independent ways ([`tensor`]);
//! - exact integration over the uniform measure on the 3-sphere plus a
//!   seeded Monte Carlo sampler ([`haar`]);
//! - spectral laws, moment tables, Cauchy transforms, and Stieltjes
//!   inversion for the diagonal-coordinate variables ([`laws`]);
//! - the classical symmetric-group baseline ([`s4`]).
//!
//! Everything symbolic is exact: scalars are arbitrary-precision rationals
//! (optionally polynomials in the interpolation parameter `t`), and equality
//! checks between the two moment pipelines are exact rational comparisons
//! with no tolerances.

pub mod error;
pub mod exact;
pub mod haar;
pub mod laws;
pub mod linalg;
pub mod nc;
pub mod output;
pub mod pauli;
pub(crate) mod polymat;
pub mod report;
pub mod s4;
pub mod tensor;
pub mod weingarten;

pub use error::{Error, Result};
