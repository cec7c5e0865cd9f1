use thiserror::Error;

/// Errors shared by every solver and gate model in this crate.
///
/// The split between `InvalidParameter`/`InvalidModel`/`InvalidState` (caller
/// handed us something malformed) and the remaining variants (the computation
/// itself failed a physical or numerical check) is what the CLI uses to pick
/// its exit code.
#[derive(Debug, Error)]
pub enum SimError {
    /// A scalar argument is out of its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operator, channel list or Hamiltonian violates a structural
    /// requirement (wrong dimension, non-Hermitian, negative rate, ...).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A state vector or density operator is malformed.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The scattered field has not rung down by the end of the integration
    /// window, so steady-state quantities would be meaningless.
    #[error("incomplete scattering: {0}")]
    IncompleteScattering(String),

    /// A closed-form expression hit a vanishing denominator.
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// The trajectory never satisfied the requested settling tolerance.
    #[error("no steady state reached: {0}")]
    NoSteadyState(String),

    /// Population failed to return to the computational subspace.
    #[error("incomplete return: {0}")]
    IncompleteReturn(String),

    /// Geometric inputs are inconsistent (e.g. a chord longer than the
    /// diameter of its circle).
    #[error("impossible geometry: {0}")]
    Geometry(String),

    /// Population reached the truncation edge of a Fock ladder.
    #[error("truncation overflow: {0}")]
    Truncation(String),

    /// Not enough events to form the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An internal numerical routine failed (singular solve, accuracy check).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
