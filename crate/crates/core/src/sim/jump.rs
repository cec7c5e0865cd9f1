//! Quantum-jump (Monte Carlo wave function) unraveling of a Lindblad model.
//!
//! Between jumps the state evolves under the non-Hermitian effective
//! Hamiltonian H_eff = H - (i/2) Σ_k rate_k L_k†L_k. For a time-independent
//! model the one-step fourth-order Runge-Kutta map of this linear system is
//! exactly the degree-4 Taylor polynomial of exp(-i H_eff dt), so the step
//! matrix is precomputed once and each step costs a single matrix-vector
//! product. Jump times are resolved inside a step by walking a ladder of
//! halved-step propagators (binary fractions of dt), giving a jump-time
//! resolution of dt / 2^24 without any re-integration.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Result, SimError};
use crate::linalg;
use crate::sim::operator::LindbladModel;
use crate::sim::pulse::TimeGrid;
use crate::sim::state::StateVector;

/// Number of halvings available for in-step jump-time bisection.
const BISECT_LEVELS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    /// Index into the model's channel list.
    pub channel: usize,
}

#[derive(Debug, Clone)]
pub struct JumpTrajectory {
    pub times: Vec<f64>,
    /// Normalized states at the grid points.
    pub states: Vec<StateVector>,
    pub jumps: Vec<JumpEvent>,
    pub seed: u64,
}

struct Engine {
    dim: usize,
    /// props[j] advances by dt / 2^j.
    props: Vec<Vec<C64>>,
    /// (L as row-major matrix, rate).
    collapse: Vec<(Vec<C64>, f64)>,
}

fn flatten(m: &Array2<C64>) -> Vec<C64> {
    m.iter().copied().collect()
}

fn matvec(m: &[C64], v: &[C64], out: &mut [C64]) {
    let n = v.len();
    for r in 0..n {
        let row = &m[r * n..(r + 1) * n];
        let mut acc = C64::new(0.0, 0.0);
        for c in 0..n {
            acc += row[c] * v[c];
        }
        out[r] = acc;
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

impl Engine {
    fn build(model: &LindbladModel, dt: f64) -> Engine {
        let n = model.dim();
        // A = -i H - (1/2) Σ rate L†L
        let mut a = model.hamiltonian().matrix().mapv(|z| C64::new(z.im, -z.re));
        for (l, rate) in model.channels() {
            if *rate == 0.0 {
                continue;
            }
            let lm = l.matrix();
            let ll = linalg::dagger(lm).dot(lm);
            a.scaled_add(C64::new(-0.5 * rate, 0.0), &ll);
        }
        let mut props = Vec::with_capacity(BISECT_LEVELS + 1);
        for j in 0..=BISECT_LEVELS {
            let step = dt / (1u64 << j) as f64;
            let scaled = a.mapv(|z| z * step);
            props.push(flatten(&linalg::taylor_propagator(&scaled, 4)));
        }
        let collapse = model
            .channels()
            .iter()
            .map(|(l, rate)| (flatten(l.matrix()), *rate))
            .collect();
        Engine { dim: n, props, collapse }
    }

    /// Apply the collapse drawn from the channel weights at the (unnormalized)
    /// pre-jump state. Returns the channel index, or None when every channel
    /// has zero weight (possible only through round-off).
    fn collapse_state(&self, psi: &mut Vec<C64>, buf: &mut Vec<C64>, rng: &mut ChaCha12Rng) -> Option<usize> {
        let mut weights = Vec::with_capacity(self.collapse.len());
        let mut total = 0.0;
        for (l, rate) in &self.collapse {
            let w = if *rate == 0.0 {
                0.0
            } else {
                matvec(l, psi, buf);
                rate * norm_sqr(buf)
            };
            weights.push(w);
            total += w;
        }
        if total <= 0.0 {
            return None;
        }
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = weights.len() - 1;
        for (k, w) in weights.iter().enumerate() {
            if u < *w {
                chosen = k;
                break;
            }
            u -= w;
        }
        matvec(&self.collapse[chosen].0, psi, buf);
        let norm = norm_sqr(buf).sqrt();
        for (p, b) in psi.iter_mut().zip(buf.iter()) {
            *p = b / norm;
        }
        Some(chosen)
    }
}

fn draw_threshold(rng: &mut ChaCha12Rng) -> f64 {
    loop {
        let r = rng.gen::<f64>();
        if r > 0.0 {
            return r;
        }
    }
}

fn run(
    model: &LindbladModel,
    psi0: &StateVector,
    grid: &TimeGrid,
    seed: u64,
    record: bool,
) -> Result<JumpTrajectory> {
    if psi0.dim() != model.dim() {
        return Err(SimError::InvalidState(format!(
            "state dimension {} does not match model dimension {}",
            psi0.dim(),
            model.dim()
        )));
    }
    let engine = Engine::build(model, grid.dt());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let full: u64 = 1 << BISECT_LEVELS;
    let dt = grid.dt();

    let mut psi: Vec<C64> = psi0.amplitudes().iter().copied().collect();
    let mut trial = vec![C64::new(0.0, 0.0); engine.dim];
    let mut buf = vec![C64::new(0.0, 0.0); engine.dim];
    let mut threshold = draw_threshold(&mut rng);

    let mut jumps = Vec::new();
    let mut times = Vec::new();
    let mut states = Vec::new();
    if record {
        times.push(grid.time(0));
        states.push(psi0.clone());
    }

    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        let mut pos: u64 = 0;
        let mut floor_level = 0usize;
        while pos < full {
            // Coarsest aligned block that fits, no coarser than floor_level.
            let mut level = floor_level;
            loop {
                let b = full >> level;
                if pos % b == 0 && pos + b <= full {
                    break;
                }
                level += 1;
            }
            let block = full >> level;
            matvec(&engine.props[level], &psi, &mut trial);
            let n2 = norm_sqr(&trial);
            if n2 >= threshold {
                std::mem::swap(&mut psi, &mut trial);
                pos += block;
                floor_level = 0;
            } else if level == BISECT_LEVELS {
                // Jump inside the finest slice: commit the slice, collapse.
                std::mem::swap(&mut psi, &mut trial);
                pos += block;
                let t_jump = t + dt * (pos as f64 / full as f64);
                match engine.collapse_state(&mut psi, &mut buf, &mut rng) {
                    Some(channel) => jumps.push(JumpEvent { time: t_jump, channel }),
                    None => {
                        // No channel carries weight (all rates zero); the norm
                        // crossing was round-off. Rescale the threshold under
                        // the current norm and carry on.
                        threshold = draw_threshold(&mut rng) * norm_sqr(&psi);
                        floor_level = 0;
                        continue;
                    }
                }
                threshold = draw_threshold(&mut rng);
                floor_level = 0;
            } else {
                floor_level = level + 1;
            }
        }
        if record {
            let norm = norm_sqr(&psi).sqrt();
            let normalized: Vec<C64> = psi.iter().map(|z| z / norm).collect();
            times.push(grid.time(k + 1));
            states.push(StateVector::from_array_unchecked(normalized.into()));
        }
    }

    Ok(JumpTrajectory { times, states, jumps, seed })
}

/// Unravel one stochastic trajectory, recording the normalized state at every
/// grid point together with the jump record. A fixed seed gives a bit-identical
/// trajectory on every run.
pub fn quantum_jump_trajectory(
    model: &LindbladModel,
    psi0: &StateVector,
    grid: &TimeGrid,
    seed: u64,
) -> Result<JumpTrajectory> {
    run(model, psi0, grid, seed, true)
}

/// Jump record only (no state storage); used for large ensembles.
pub fn jump_events(
    model: &LindbladModel,
    psi0: &StateVector,
    grid: &TimeGrid,
    seed: u64,
) -> Result<Vec<JumpEvent>> {
    Ok(run(model, psi0, grid, seed, false)?.jumps)
}
