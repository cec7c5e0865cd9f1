use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};
use crate::linalg;

/// Tolerance on the norm of a state handed in by a caller.
pub const STATE_NORM_TOL: f64 = 1e-6;

/// A pure state on a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Array1<C64>,
}

impl StateVector {
    /// Wrap a normalized amplitude vector; rejects vectors whose norm
    /// deviates from 1 by more than `STATE_NORM_TOL`.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let amps = Array1::from(amps);
        if amps.is_empty() {
            return Err(SimError::InvalidState("empty state vector".into()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(SimError::InvalidState(format!(
                "state vector norm is {norm:.6}, expected 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Wrap an arbitrary nonzero vector, normalizing it.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut amps = Array1::from(amps);
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(SimError::InvalidState("cannot normalize the zero vector".into()));
        }
        amps.mapv_inplace(|z| z / norm);
        Ok(Self { amps })
    }

    /// Computational basis state |index> in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(SimError::InvalidState(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = Array1::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub(crate) fn from_array_unchecked(amps: Array1<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>|^2.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Kronecker product |self> ⊗ |other>.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Array1::zeros(self.dim() * other.dim());
        for (i, a) in self.amps.iter().enumerate() {
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * other.dim() + j] = a * b;
            }
        }
        Self { amps }
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite (up to a
/// small numerical allowance). The checked constructor pays one
/// eigendecomposition; integrators use the unchecked path internally and
/// report positivity through their own diagnostics instead.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: Array2<C64>,
}

/// Eigenvalues may dip this far below zero before construction is rejected.
pub const POSITIVITY_TOL: f64 = 1e-9;

impl DensityOperator {
    pub fn new(mat: Array2<C64>) -> Result<Self> {
        let n = mat.nrows();
        if n == 0 || mat.ncols() != n {
            return Err(SimError::InvalidState("density operator must be square".into()));
        }
        let scale = linalg::max_abs(&mat).max(1.0);
        if !linalg::is_hermitian(&mat, 1e-9 * scale) {
            return Err(SimError::InvalidState("density operator is not Hermitian".into()));
        }
        let trace: C64 = (0..n).map(|i| mat[[i, i]]).sum();
        if (trace.re - 1.0).abs() > 1e-6 || trace.im.abs() > 1e-9 {
            return Err(SimError::InvalidState(format!(
                "density operator trace is {:.6}+{:.2e}i, expected 1",
                trace.re, trace.im
            )));
        }
        let out = Self { mat };
        let min_eig = out.min_eigenvalue()?;
        if min_eig < -POSITIVITY_TOL {
            return Err(SimError::InvalidState(format!(
                "density operator has eigenvalue {min_eig:.3e} < -{POSITIVITY_TOL:.0e}"
            )));
        }
        Ok(out)
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let n = psi.dim();
        let mut mat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] = psi.amplitude(i) * psi.amplitude(j).conj();
            }
        }
        Self { mat }
    }

    pub(crate) fn from_matrix_unchecked(mat: Array2<C64>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[[i, i]]).sum()
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += (self.mat[[i, j]] * self.mat[[j, i]]).re;
            }
        }
        s
    }

    pub fn population(&self, index: usize) -> f64 {
        self.mat[[index, index]].re
    }

    /// Tr(rho A).
    pub fn expectation(&self, a: &Array2<C64>) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += self.mat[[i, j]] * a[[j, i]];
            }
        }
        s
    }

    /// Smallest eigenvalue; used as the positivity diagnostic.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = linalg::hermitian_eigen(&self.mat)?;
        Ok(vals[0])
    }

    /// Partial trace over all tensor factors *not* listed in `keep`.
    /// `dims` are the factor dimensions in tensor order (row-major index
    /// convention), `keep` the sorted factor positions to retain.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(SimError::InvalidState(format!(
                "factor dimensions multiply to {total}, state has dimension {}",
                self.dim()
            )));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return Err(SimError::InvalidParameter(
                "kept factors must be sorted, unique and in range".into(),
            ));
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product::<usize>().max(1);

        // Build a full index from a kept multi-index and a traced multi-index.
        let compose = |ik: usize, it: usize| -> usize {
            let mut digits = vec![0usize; dims.len()];
            let mut rk = ik;
            for (pos, &k) in keep.iter().enumerate().rev() {
                digits[k] = rk % kept_dims[pos];
                rk /= kept_dims[pos];
            }
            let mut rt = it;
            for (pos, &k) in traced.iter().enumerate().rev() {
                digits[k] = rt % traced_dims[pos];
                rt /= traced_dims[pos];
            }
            let mut idx = 0;
            for (d, &digit) in dims.iter().zip(digits.iter()) {
                idx = idx * d + digit;
            }
            idx
        };

        let mut out = Array2::<C64>::zeros((dk, dk));
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.mat[[compose(i, t), compose(j, t)]];
                }
                out[[i, j]] = acc;
            }
        }
        Ok(DensityOperator { mat: out })
    }
}
