use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};
use crate::linalg;
use crate::sim::state::StateVector;

/// Hermiticity tolerance enforced when an operator is declared Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense operator with an explicit hermiticity tag. The tag is verified
/// at construction so downstream solvers can trust it.
#[derive(Debug, Clone)]
pub struct Operator {
    mat: Array2<C64>,
    hermitian: bool,
}

impl Operator {
    /// An operator asserted to be Hermitian; verified entrywise against
    /// `HERMITIAN_TOL` (scaled by the largest entry).
    pub fn hermitian(mat: Array2<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(SimError::InvalidModel("operator must be square".into()));
        }
        let scale = linalg::max_abs(&mat).max(1.0);
        if !linalg::is_hermitian(&mat, HERMITIAN_TOL * scale) {
            return Err(SimError::InvalidModel("operator is not Hermitian".into()));
        }
        Ok(Self { mat, hermitian: true })
    }

    /// A general (possibly non-Hermitian) operator, e.g. a collapse operator.
    pub fn general(mat: Array2<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(SimError::InvalidModel("operator must be square".into()));
        }
        Ok(Self { mat, hermitian: false })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dagger(&self) -> Operator {
        Operator { mat: linalg::dagger(&self.mat), hermitian: self.hermitian }
    }

    /// self ⊗ other.
    pub fn tensor(&self, other: &Operator) -> Operator {
        Operator {
            mat: linalg::kron(&self.mat, &other.mat),
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(SimError::InvalidState(format!(
                "operator dimension {} does not match state dimension {}",
                self.dim(),
                psi.dim()
            )));
        }
        Ok(StateVector::from_array_unchecked(self.mat.dot(psi.amplitudes())))
    }
}

/// An open-system model: Hamiltonian plus weighted collapse channels
/// d rho/dt = -i[H, rho] + sum_k rate_k (L rho L† - {L†L, rho}/2).
#[derive(Debug, Clone)]
pub struct LindbladModel {
    hamiltonian: Operator,
    channels: Vec<(Operator, f64)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, channels: Vec<(Operator, f64)>) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(SimError::InvalidModel(
                "Lindblad Hamiltonian must be constructed as Hermitian".into(),
            ));
        }
        for (k, (op, rate)) in channels.iter().enumerate() {
            if op.dim() != hamiltonian.dim() {
                return Err(SimError::InvalidModel(format!(
                    "channel {k} dimension {} does not match Hamiltonian dimension {}",
                    op.dim(),
                    hamiltonian.dim()
                )));
            }
            if !rate.is_finite() || *rate < 0.0 {
                return Err(SimError::InvalidModel(format!(
                    "channel {k} has negative or non-finite rate {rate}"
                )));
            }
        }
        Ok(Self { hamiltonian, channels })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[(Operator, f64)] {
        &self.channels
    }
}

/// Standard matrices. Convention: sigma_z |0> = +|0>, so index 0 is the
/// sigma_z = +1 basis state; which index a given model treats as "excited"
/// is the model's choice.
pub mod matrices {
    use super::*;

    pub fn identity(dim: usize) -> Array2<C64> {
        Array2::eye(dim)
    }

    /// |i><j| in `dim` dimensions.
    pub fn ketbra(dim: usize, i: usize, j: usize) -> Array2<C64> {
        let mut m = Array2::zeros((dim, dim));
        m[[i, j]] = C64::new(1.0, 0.0);
        m
    }

    pub fn pauli_x() -> Array2<C64> {
        ndarray::array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        ]
    }

    pub fn pauli_y() -> Array2<C64> {
        ndarray::array![
            [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]
        ]
    }

    pub fn pauli_z() -> Array2<C64> {
        ndarray::array![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]
        ]
    }

    /// Bosonic annihilation operator on the truncated ladder {0..n_max}.
    pub fn annihilation(n_max: usize) -> Array2<C64> {
        let dim = n_max + 1;
        let mut a = Array2::zeros((dim, dim));
        for n in 1..dim {
            a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    pub fn creation(n_max: usize) -> Array2<C64> {
        linalg::dagger(&annihilation(n_max))
    }

    pub fn number(n_max: usize) -> Array2<C64> {
        let dim = n_max + 1;
        let mut m = Array2::zeros((dim, dim));
        for n in 0..dim {
            m[[n, n]] = C64::new(n as f64, 0.0);
        }
        m
    }
}
