//! Exact-arithmetic engine for commutative bigraded bidifferential algebras.
//!
//! The crate is organised in layers:
//!
//! * [`scalar`] — arbitrary-precision rationals and Gaussian rationals.
//! * [`linalg`] — dense exact linear algebra: kernels, images, subspace
//!   intersections/sums, quotients and linear solves in canonical form.
//! * [`cbba`] — finite models of bigraded bidifferential algebras with two
//!   anticommuting differentials, their four cohomologies (Bott-Chern,
//!   Aeppli, de Rham, Dolbeault) and the comparison maps between them.
//! * [`massey`] — triple Massey products, both the ordinary variant and the
//!   secondary variant driven by `i∂∂̄`, returned as cosets modulo their
//!   indeterminacy subspace.
//! * [`blowup`] — intersection rings of iterated blow-ups of projective
//!   space at points and rational curves, with integration pairing and
//!   strict-transform bookkeeping.
//! * [`invariants`] — the end-to-end pipeline on the standard blown-up
//!   `P^3` configuration: indeterminacy annihilation, weighted Massey
//!   representatives, cross-ratio values and the biholomorphism invariant.

pub mod blowup;
pub mod cbba;
pub mod exterior;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod logvalue;
pub mod massey;
pub mod mobius;
pub mod samples;
pub mod scalar;

pub use scalar::{GaussianRational, Rational};
