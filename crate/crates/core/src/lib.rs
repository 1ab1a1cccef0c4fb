//! Numerical engines for single-photon beam-splitter and Mach-Zehnder
//! experiments with a gated atomic-cascade source.
//!
//! The crate is `no_std` (with `alloc`) and has no IO. It covers:
//!
//! - [`fock`]: photon-number expectations and the degree of second-order
//!   coherence g⁽²⁾ for number, coherent and chaotic light behind a
//!   single-input beam splitter, in closed form and by a truncated two-mode
//!   Fock-space oracle.
//! - [`classical`]: the semiclassical gate-intensity model and its bound
//!   α ≥ 1.
//! - [`cascade`]: an event-driven Monte Carlo of the gated cascade source and
//!   coincidence counters, with the analytic g⁽²⁾(Nω) prediction.
//! - [`beables`]: normal-mode trajectories of the causal field model, the
//!   field beables A, E, B, I behind the beam splitter and behind the
//!   interferometer, the field quantum potential and the wave-equation check.
//! - [`photodetect`]: first-order photo-ionization amplitudes and the
//!   whole-quantum absorption selection rule.
//!
//! The `gralab` crate carries configuration files, CSV/SVG output and the
//! command-line front end.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod beables;
pub mod cascade;
pub mod classical;
pub mod fock;
pub mod photodetect;

pub use num_complex::Complex64;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

