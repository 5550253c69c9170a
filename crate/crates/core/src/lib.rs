//! Exact lattice-point counting for polytopes whose data lie in real
//! multi-quadratic number fields.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! * [`qfield`]: exact arithmetic in `Q(√m₁, √m₂, …)`, certified sign and
//!   floor, Bernoulli numbers and the rational part of `ζ(2k)`.
//! * [`polytope`]: cross-polytopes, orthant simplices, general
//!   H-representations, vector dilation and admissibility.
//! * [`enumerate`]: the exact counting oracle (closed, interior, boundary).
//! * [`ehrhart`]: the Ehrhart-like polynomials `p(t)`, `q(t)`, their
//!   interior transforms and the vector-dilated approximation.
//! * [`beck`]: quasipolynomial reconstruction for rational simplices under
//!   vector dilation and the reciprocity check `i(-t) = (-1)^n j(t)`.
#![no_std]

extern crate alloc;

mod error;
mod linalg;

pub mod beck;
pub mod ehrhart;
pub mod enumerate;
pub mod polytope;
pub mod qfield;

pub use error::{Error, Result};
pub use qfield::{AlgebraicQuad, Rational};
