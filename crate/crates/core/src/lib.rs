//! Finite-horizon experiments on expansive-type homeomorphisms.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! algorithms:
//!
//! * [`metric`]: points, metrics, point clouds, Hausdorff distance, chain
//!   components.
//! * [`dimension`]: open box covers, exact cover order and two-sided bounds
//!   for the ε-dimension of a sampled compact set.
//! * [`systems`]: the catalog of concrete maps (torus automorphism, annulus
//!   twist, irregular saddle, doubling map and its solenoid).
//! * [`expansivity`]: dynamical balls, continuum iteration, notion testers,
//!   stable-set scans and doubly asymptotic sector detection.
//! * [`tangency`]: polynomial jets, Sturm root counting and the local
//!   N-expansivity bound for tangencies of finite order.
//!
//! File formats, rendering and the command line live in the `expansive`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dimension;
mod error;
pub mod expansivity;
pub(crate) mod fmath;
pub mod metric;
pub mod systems;
pub mod tangency;

pub use error::{Error, Result};

/// Absolute tolerance used for floating point comparisons unless an
/// operation states its own.
pub const ABS_TOL: f64 = 1e-9;
