//! Simulation library for quantum gates that are triggered by the arrival of
//! a traveling excitation (a single photon, a clock tick) rather than by an
//! external timed control pulse.
//!
//! The crate is organized around a small dense-solver core ([`sim`]) and one
//! module per physical platform:
//!
//! * [`dispersive`] — a cavity-mediated Z rotation driven by one scattered
//!   photon, solved through effective scattering equations of motion.
//! * [`rydberg`] — blockade-based controlled-Z gates (three-pulse and
//!   two-pulse variants) plus ultrafast exchange and timing helpers.
//! * [`ions`] — a bichromatic two-ion entangling gate and exposure/timing
//!   models for moving-trap and rotating-trap geometries.
//! * [`clock`] — an autonomous thermal clock whose emitted quanta trigger
//!   gate ticks; jump statistics, steady-state flux, tick-budgeted plans.
//! * [`xy`] — a photon-triggered XY(θ) gate between two detuned qubits that
//!   a cavity photon pulls into mutual resonance.
//!
//! Internally every module works in angular frequency units (rad/s) with
//! ħ = 1, normalizing its dominant decay rate where that keeps numbers tame;
//! all SI conversion lives in the CLI layer.

pub mod constants;
pub mod error;
pub mod linalg;
pub mod sim;

pub mod clock;
pub mod dispersive;
pub mod ions;
pub mod rydberg;
pub mod xy;

pub use error::{Result, SimError};

/// Convenience alias used throughout: `C64` is a double-precision complex number.
pub type C64 = num_complex::Complex64;
