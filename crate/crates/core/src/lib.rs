//! Exact single-excitation dynamics of quantum emitters coupled to a
//! cavity-array (tight-binding) waveguide.
//!
//! The emitter amplitude is obtained by inverting the Laplace transform of
//! the resolvent: a branch-cut integral over the band `[-2ξ, 2ξ]` plus one
//! residue per real pole. Poles outside the band are bound states outside
//! the continuum (BOC); a giant emitter with two coupling points also
//! supports poles inside the band (BIC) at the zeros of its effective
//! spectral function.
//!
//! Every analytic result can be cross-checked against [`lattice`], a
//! brute-force integrator and exact diagonalizer of the finite chain.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// Newer toolchains expose the float methods in core; the `Float` imports
// keep older ones building.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bessel;
pub mod bound_states;
pub mod circuit;
pub mod dynamics;
mod error;
pub mod lattice;
pub mod linalg;
pub mod master_eq;
pub mod model;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{Geometry, ModelParams, SimulationGrid};
pub use num_complex::Complex64 as C64;
