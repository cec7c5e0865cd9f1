//! Shared simulation machinery: states, operators, pulse envelopes, and the
//! Schrödinger / Lindblad / quantum-jump integrators built on a fixed-step
//! fourth-order Runge-Kutta scheme.

pub mod jump;
pub mod lindblad;
pub mod operator;
pub mod pulse;
pub mod schrodinger;
pub mod state;

pub use jump::{jump_events, quantum_jump_trajectory, JumpEvent, JumpTrajectory};
pub use lindblad::{
    integrate_lindblad, integrate_lindblad_strided, liouvillian_matrix, steady_state,
    MasterTrajectory,
};
pub use operator::{matrices, LindbladModel, Operator};
pub use pulse::{gaussian_envelope, square_envelope, PulseEnvelope, TimeGrid};
pub use schrodinger::{integrate_schrodinger, WaveTrajectory};
pub use state::{DensityOperator, StateVector};
