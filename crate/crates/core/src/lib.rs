//! Exact computations in the tautological ring of a Prym variety carrying an
//! Abel-Prym curve `Z`.
//!
//! - [`arith`]: exact rationals, binomials, Bernoulli numbers.
//! - [`tuples`]: the `(n, m)` index sets and their multiset counts.
//! - [`coefficients`]: the coefficients `c_{t,r,d}` and related weights.
//! - [`taut`]: formal Pontryagin expressions, Beauville-graded extraction and
//!   the zeta-generator basis.
//! - [`bn`]: Brill-Noether numerology and applicability checks.

pub mod arith;
pub mod bn;
pub mod coefficients;
pub mod error;
pub mod taut;
pub mod tuples;

pub use arith::{bernoulli, binomial, Rational};
pub use error::{Error, Result};
