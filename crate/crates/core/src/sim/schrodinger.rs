use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};
use crate::linalg;
use crate::sim::pulse::TimeGrid;
use crate::sim::state::StateVector;

/// Norm drift allowed over a full Schrödinger integration.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct WaveTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

impl WaveTrajectory {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory has at least one point")
    }
}

/// Integrate i d|psi>/dt = H(t) |psi> with the classical fourth-order
/// Runge-Kutta scheme on a fixed grid. `h` is evaluated at t, t + dt/2 and
/// t + dt for every step and must return a Hermitian matrix (checked, with
/// tolerance 1e-9 relative to the largest entry).
///
/// The norm of the state is never renormalized; if it drifts from 1 by more
/// than `NORM_DRIFT_TOL` the integration is rejected as under-resolved.
pub fn integrate_schrodinger<F>(
    h: F,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<WaveTrajectory>
where
    F: Fn(f64) -> Array2<C64>,
{
    let dim = psi0.dim();
    let dt = grid.dt();
    let half = C64::new(0.5 * dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);

    let eval = |t: f64| -> Result<Array2<C64>> {
        let m = h(t);
        if m.nrows() != dim || m.ncols() != dim {
            return Err(SimError::InvalidModel(format!(
                "Hamiltonian at t={t} has dimension {}x{}, state has {dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = linalg::max_abs(&m).max(1.0);
        if !linalg::is_hermitian(&m, 1e-9 * scale) {
            return Err(SimError::InvalidModel(format!(
                "Hamiltonian is not Hermitian at t={t}"
            )));
        }
        Ok(m)
    };

    let deriv = |m: &Array2<C64>, v: &Array1<C64>| -> Array1<C64> {
        let mut out = m.dot(v);
        out.mapv_inplace(|z| C64::new(z.im, -z.re)); // multiply by -i
        out
    };

    let mut psi = psi0.amplitudes().clone();
    let mut times = Vec::with_capacity(grid.n_steps() + 1);
    let mut states = Vec::with_capacity(grid.n_steps() + 1);
    times.push(grid.time(0));
    states.push(psi0.clone());

    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        let h0 = eval(t)?;
        let hm = eval(t + 0.5 * dt)?;
        let h1 = eval(t + dt)?;

        let k1 = deriv(&h0, &psi);
        let k2 = deriv(&hm, &(&psi + &(&k1 * half)));
        let k3 = deriv(&hm, &(&psi + &(&k2 * half)));
        let k4 = deriv(&h1, &(&psi + &(&k3 * C64::new(dt, 0.0))));

        let incr = &k1 + &(&k2 * C64::new(2.0, 0.0)) + &(&k3 * C64::new(2.0, 0.0)) + &k4;
        psi = &psi + &(&incr * sixth);

        times.push(grid.time(k + 1));
        states.push(StateVector::from_array_unchecked(psi.clone()));
    }

    let norm = states.last().unwrap().norm();
    if (norm - 1.0).abs() > NORM_DRIFT_TOL {
        return Err(SimError::Numerical(format!(
            "norm drifted to {norm:.10} over the integration; refine the time step"
        )));
    }
    Ok(WaveTrajectory { times, states })
}
