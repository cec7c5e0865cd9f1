use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};
use crate::linalg;
use crate::sim::operator::LindbladModel;
use crate::sim::pulse::TimeGrid;
use crate::sim::state::DensityOperator;

/// Trace drift allowed over a master-equation integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;
/// Negative-eigenvalue excursions beyond this raise a diagnostics warning.
pub const POSITIVITY_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator>,
    /// Diagnostics collected during integration (e.g. positivity excursions).
    /// Never fatal: the solvers do not clip or project the state.
    pub warnings: Vec<String>,
}

impl MasterTrajectory {
    pub fn final_state(&self) -> &DensityOperator {
        self.states.last().expect("trajectory has at least one point")
    }
}

fn lindblad_rhs(
    h: &Array2<C64>,
    chans: &[(Array2<C64>, Array2<C64>, f64)], // (L, L†L, rate)
    rho: &Array2<C64>,
) -> Array2<C64> {
    let hr = h.dot(rho);
    let rh = rho.dot(h);
    let mut out = Array2::<C64>::zeros(rho.dim());
    ndarray::Zip::from(&mut out).and(&hr).and(&rh).for_each(|o, a, b| {
        let c = a - b;
        *o = C64::new(c.im, -c.re); // -i [H, rho]
    });
    for (l, ll, rate) in chans {
        if *rate == 0.0 {
            continue;
        }
        let lr = l.dot(rho);
        let sandwich = lr.dot(&linalg::dagger(l));
        let anti = ll.dot(rho) + rho.dot(ll);
        ndarray::Zip::from(&mut out).and(&sandwich).and(&anti).for_each(|o, s, a| {
            *o += rate * (s - 0.5 * a);
        });
    }
    out
}

/// Integrate the master equation with fixed-step fourth-order Runge-Kutta,
/// recording every `stride`-th grid point (the initial and final points are
/// always recorded). Trace is checked at every recorded point; positivity is
/// checked at the final point and reported through `warnings`.
pub fn integrate_lindblad_strided(
    model: &LindbladModel,
    rho0: &DensityOperator,
    grid: &TimeGrid,
    stride: usize,
) -> Result<MasterTrajectory> {
    if rho0.dim() != model.dim() {
        return Err(SimError::InvalidState(format!(
            "density operator dimension {} does not match model dimension {}",
            rho0.dim(),
            model.dim()
        )));
    }
    let stride = stride.max(1);
    let h = model.hamiltonian().matrix().clone();
    let chans: Vec<(Array2<C64>, Array2<C64>, f64)> = model
        .channels()
        .iter()
        .map(|(l, rate)| {
            let lm = l.matrix().clone();
            let ll = linalg::dagger(&lm).dot(&lm);
            (lm, ll, *rate)
        })
        .collect();

    let dt = grid.dt();
    let mut rho = rho0.matrix().clone();
    let mut times = vec![grid.time(0)];
    let mut states = vec![rho0.clone()];
    let mut warnings = Vec::new();

    for k in 0..grid.n_steps() {
        let k1 = lindblad_rhs(&h, &chans, &rho);
        let k2 = lindblad_rhs(&h, &chans, &(&rho + &(&k1 * C64::new(0.5 * dt, 0.0))));
        let k3 = lindblad_rhs(&h, &chans, &(&rho + &(&k2 * C64::new(0.5 * dt, 0.0))));
        let k4 = lindblad_rhs(&h, &chans, &(&rho + &(&k3 * C64::new(dt, 0.0))));
        let incr = &k1 + &(&k2 * C64::new(2.0, 0.0)) + &(&k3 * C64::new(2.0, 0.0)) + &k4;
        rho = &rho + &(&incr * C64::new(dt / 6.0, 0.0));

        let at_end = k + 1 == grid.n_steps();
        if (k + 1) % stride == 0 || at_end {
            let trace: C64 = (0..rho.nrows()).map(|i| rho[[i, i]]).sum();
            if (trace.re - 1.0).abs() > TRACE_DRIFT_TOL || trace.im.abs() > TRACE_DRIFT_TOL {
                return Err(SimError::Numerical(format!(
                    "trace drifted to {:.10} at t={}; refine the time step",
                    trace.re,
                    grid.time(k + 1)
                )));
            }
            times.push(grid.time(k + 1));
            states.push(DensityOperator::from_matrix_unchecked(rho.clone()));
        }
    }

    if let Ok(min_eig) = states.last().unwrap().min_eigenvalue() {
        if min_eig < -POSITIVITY_WARN_TOL {
            warnings.push(format!(
                "final state has eigenvalue {min_eig:.3e}; positivity violated beyond {POSITIVITY_WARN_TOL:.0e}"
            ));
        }
    }

    Ok(MasterTrajectory { times, states, warnings })
}

/// `integrate_lindblad_strided` recording every grid point.
pub fn integrate_lindblad(
    model: &LindbladModel,
    rho0: &DensityOperator,
    grid: &TimeGrid,
) -> Result<MasterTrajectory> {
    integrate_lindblad_strided(model, rho0, grid, 1)
}

/// The Liouvillian as a dense matrix acting on row-major vectorized density
/// operators: vec(A X B) = (A ⊗ B^T) vec(X).
pub fn liouvillian_matrix(model: &LindbladModel) -> Array2<C64> {
    let n = model.dim();
    let eye = Array2::<C64>::eye(n);
    let h = model.hamiltonian().matrix();
    let mut sup = Array2::<C64>::zeros((n * n, n * n));

    let minus_i = C64::new(0.0, -1.0);
    let comm = linalg::kron(h, &eye) - linalg::kron(&eye, &h.t().to_owned());
    sup.scaled_add(minus_i, &comm);

    for (l, rate) in model.channels() {
        if *rate == 0.0 {
            continue;
        }
        let lm = l.matrix();
        let ld = linalg::dagger(lm);
        let ll = ld.dot(lm);
        let r = C64::new(*rate, 0.0);
        let jump = linalg::kron(lm, &lm.mapv(|z| z.conj()));
        sup.scaled_add(r, &jump);
        let anti = linalg::kron(&ll, &eye) + linalg::kron(&eye, &ll.t().to_owned());
        sup.scaled_add(-0.5 * r, &anti);
    }
    sup
}

/// Stationary state of the model: the null vector of the Liouvillian with
/// unit trace, found by replacing one row of the singular system with the
/// trace constraint and solving densely.
pub fn steady_state(model: &LindbladModel) -> Result<DensityOperator> {
    let n = model.dim();
    let sup = liouvillian_matrix(model);

    // Try successive rows as the trace-constraint row in the (unlikely)
    // event the first choice makes the system singular.
    for replace_row in 0..n {
        let mut m = sup.clone();
        let mut b = Array1::<C64>::zeros(n * n);
        let row = replace_row * n + replace_row; // a diagonal-entry row
        for c in 0..n * n {
            m[[row, c]] = C64::new(0.0, 0.0);
        }
        for i in 0..n {
            m[[row, i * n + i]] = C64::new(1.0, 0.0);
        }
        b[row] = C64::new(1.0, 0.0);
        match linalg::solve(&m, &b) {
            Ok(x) => {
                let mut rho = Array2::<C64>::zeros((n, n));
                for i in 0..n {
                    for j in 0..n {
                        rho[[i, j]] = x[i * n + j];
                    }
                }
                // Hermitize and renormalize away round-off.
                let mut sym = Array2::<C64>::zeros((n, n));
                for i in 0..n {
                    for j in 0..n {
                        sym[[i, j]] = 0.5 * (rho[[i, j]] + rho[[j, i]].conj());
                    }
                }
                let tr: C64 = (0..n).map(|i| sym[[i, i]]).sum();
                let sym = sym.mapv(|z| z / tr.re);
                return Ok(DensityOperator::from_matrix_unchecked(sym));
            }
            Err(_) => continue,
        }
    }
    Err(SimError::Numerical("no steady state found: Liouvillian solve failed".into()))
}
