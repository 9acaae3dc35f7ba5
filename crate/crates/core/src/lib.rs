#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

//! Explicit Poisson kernels for Dirichlet problems of iterated Laplace,
//! metaharmonic, wave and Klein–Gordon operators in the half-space `y > 0`.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma at half-integers, modified Bessel `K` (half-integer and
//!   integer order, complex argument), Bessel `J` of half-integer order and
//!   unit-sphere areas.
//! - [`quad`]: adaptive Gauss–Kronrod, tanh–sinh and Wynn-epsilon helpers.
//! - [`profiles`]: radial profile families whose first derivative is again a
//!   member of the family, which closes the derivative chains of the algebra.
//! - [`algebra`]: a small term-rewriting algebra of sums
//!   `c · y^a · t^e · s^q · F` with `s = |x|² + y²` and `F` a profile
//!   derivative, a truncated cone power `u_+^α` or a cone layer `δ^(k)(u)`,
//!   `u = t² − s`.
//! - [`kernels`]: constructors for the Poisson kernels, plus hand-expanded
//!   closed forms of the classical special cases.
//! - [`solver`]: convolution against boundary data and boundary-trace
//!   extraction by Richardson extrapolation.
//! - [`verify`]: certification suites (operator residuals, traces, transform
//!   pairs, Cauchy-data vanishing).
//!
//! Everything here is `no_std` + `alloc`; file formats, threading and the CLI
//! live in the companion `halfspace` crate.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod kernels;
pub mod profiles;
pub mod quad;
pub mod solver;
pub mod specfun;
pub mod testfn;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used for every kernel value.
pub type C64 = num_complex::Complex64;
