//! Oracle algorithms for homogeneous polynomials of degree `n` in `n`
//! variables with nonnegative coefficients.
//!
//! The central questions are whether the all-ones exponent vector belongs to
//! the support of a polynomial, and whether it belongs to the Newton polytope
//! (the convex hull of the support). Polynomials are accessed only through
//! evaluation oracles ([`oracle::PolynomialOracle`]); every algorithm that
//! touches a polynomial does so by evaluating it, and the oracle counts those
//! evaluations.
//!
//! Module map:
//!
//! - [`oracle`]: polynomial families and the counting oracle.
//! - [`calculus`]: univariate restrictions, partial derivatives, mixed
//!   derivatives by polarization, permanents and mixed discriminants.
//! - [`spectra`]: roots in a direction, `p`-rank, directional traces,
//!   sampled hyperbolicity and half-plane checks.
//! - [`capacity`]: the log-exponential convex functional, the ellipsoid
//!   method and the polytope decision.
//! - [`scaling`]: hyperbolic Sinkhorn scaling and its decision rule.
//! - [`combinatorics`]: supports, hull membership, Hall and Rado conditions.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature turns on
//! data-parallel sweeps; results are bit-identical with and without it.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod calculus;
pub mod capacity;
pub mod combinatorics;
mod error;
pub mod linalg;
pub mod oracle;
mod par;
pub mod scaling;
pub mod seed;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use num_complex::Complex64;
pub use oracle::{ExponentVector, Instance, InstanceSpec, Kind, PolynomialOracle};
