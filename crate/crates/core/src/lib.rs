//! Exact arithmetic for s-sequences and s-functions over cyclotomic fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`valuation`], [`cyclotomic`]: exact arithmetic in `Q` and `Q(ζ_M)`, the
//!   Frobenius automorphism `ζ ↦ ζ^p` and coordinate-wise `p`-adic orders.
//! * [`series`], [`poly`]: truncated power series with the operator algebra
//!   (`δ`, `∫^s`, Cartier, `ε`, Hadamard, `exp`/`log`, product form) and
//!   dense univariate polynomials.
//! * [`verifier`]: finite-window checks of the local s-function property in
//!   its four equivalent forms, plus the a/b/q representation converters and
//!   Dwork's integrality test.
//! * [`classifier`]: decides whether a rational function is a 2-function and
//!   produces its abelian normal form.
//! * [`lab`]: `Z/p^K` experiments with the error terms `ρ_n(m)` and `κ`.
//! * [`catalog`]: deterministic sequence generators and CSV ingestion.

pub mod catalog;
pub mod classifier;
pub mod cyclotomic;
mod error;
pub mod lab;
pub mod poly;
pub mod primes;
pub mod scalar;
pub mod series;
pub mod valuation;
pub mod verifier;

pub use cyclotomic::{CycElem, CycField};
pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use scalar::Coefficient;
pub use series::TruncSeries;
pub use valuation::ExtOrder;

/// Exact rational number; the scalar everywhere in this crate.
pub type Rational = BigRational;
