//! Experiment plumbing around [`expansive_core`]: JSON experiment configs,
//! CSV/JSON artifact formats, SVG figures and the runner behind the
//! `expansive` binary.
//!
//! A run is a pure function of its config. All outputs are computed in
//! memory first and written only when the run succeeds, so a rejected
//! config leaves the output directory untouched.

pub mod config;
mod error;
pub mod formats;
pub mod runner;
pub mod svg;

pub use error::{exit_code, RunError};

/// Crate version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Library identifier recorded in every report.
pub const LIBRARY: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
