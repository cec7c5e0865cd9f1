//! An autonomous thermal clock: a three-level atom running a heat-engine
//! cycle between two thermal qubits, emitting one observable "tick" per
//! cycle.
//!
//! The machine couples a Λ atom (levels g, s, e) to a cold qubit C and a hot
//! qubit H through the resonant three-body exchange
//!
//! ```text
//!   H_int = g₃ ( |e,1,0⟩⟨g,0,1| + h.c. ),
//! ```
//!
//! i.e. the atom absorbs a hot-qubit excitation, deposits one into the cold
//! qubit and climbs g → e. Each qubit relaxes toward its own bath; the atom
//! decays e → s at Γ_es — that emission is the tick — and resets s → g at
//! Γ_sg. The model is built in the rotating frame of the local energies,
//! where the bath couplings keep their form and any frequency mismatch
//! r = ω_ge + ω_C − ω_H appears as a static detuning on the doubly-excited
//! exchange state (exact on resonance, a standard effective model otherwise).
//!
//! All simulation quantities are normalized by κ_C; conversions back to SI
//! seconds go through [`ClockModel::time_scale`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Result, SimError};
use crate::linalg::{self, kron};
use crate::sim::jump::jump_events;
use crate::sim::lindblad::steady_state;
use crate::sim::operator::{matrices, LindbladModel, Operator};
use crate::sim::pulse::TimeGrid;
use crate::sim::state::StateVector;

/// Λ-atom level indices.
pub const LEVEL_G: usize = 0;
pub const LEVEL_S: usize = 1;
pub const LEVEL_E: usize = 2;

/// Index of the tick channel (e → s emission) in the model's channel list.
pub const TICK_CHANNEL: usize = 4;

/// Cap applied to the wait-time accuracy figure N = mean²/variance when the
/// recorded waits are numerically identical.
pub const ACCURACY_CAP: f64 = 1e15;

/// Mean thermal occupation of a mode at angular frequency `omega` in contact
/// with a bath at `temperature` (kelvin): 1/(e^{ħω/kT} − 1). A zero
/// temperature gives exactly 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "mode frequency must be positive, got {omega}"
        )));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (BOLTZMANN * temperature);
    if x > 700.0 {
        return Ok(0.0); // exp would overflow; the occupation is ~1e-304 or less
    }
    Ok(1.0 / (x.exp() - 1.0))
}

#[derive(Debug, Clone)]
pub struct ClockParams {
    /// Atom g ↔ e gap (angular).
    pub omega_ge: f64,
    /// Atom s ↔ e gap (angular); s sits below e.
    pub omega_se: f64,
    /// Cold-qubit gap (angular).
    pub omega_c: f64,
    /// Hot-qubit gap (angular).
    pub omega_h: f64,
    /// Cold-bath temperature (K).
    pub t_cold: f64,
    /// Hot-bath temperature (K).
    pub t_hot: f64,
    /// Three-body exchange strength (angular).
    pub g3: f64,
    /// Cold-qubit relaxation rate (1/s); also the normalization unit.
    pub kappa_c: f64,
    /// Hot-qubit relaxation rate (1/s).
    pub kappa_h: f64,
    /// Tick emission rate e → s (1/s).
    pub gamma_es: f64,
    /// Reset rate s → g (1/s).
    pub gamma_sg: f64,
    /// Relative mismatch |ω_ge + ω_C − ω_H| / ω_H tolerated before the model
    /// carries an off-resonance warning.
    pub resonance_tolerance: f64,
}

impl ClockParams {
    /// Microwave-regime defaults: the exchange is resonant
    /// (ω_ge = ω_H − ω_C) and every rate is tied to g₃ = 2π × 5 MHz.
    pub fn standard() -> Self {
        let tau = std::f64::consts::TAU;
        let g3 = tau * 5e6;
        Self {
            omega_ge: tau * 10e9,
            omega_se: tau * 6e9,
            omega_c: tau * 5e9,
            omega_h: tau * 15e9,
            t_cold: 0.1,
            t_hot: 1.2,
            g3,
            kappa_c: 10.0 * g3,
            kappa_h: 10.0 * g3,
            gamma_es: 5.0 * g3,
            gamma_sg: g3,
            resonance_tolerance: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_ge", self.omega_ge),
            ("omega_se", self.omega_se),
            ("omega_c", self.omega_c),
            ("omega_h", self.omega_h),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SimError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.omega_se >= self.omega_ge {
            return Err(SimError::InvalidParameter(
                "the s level must sit between g and e (omega_se < omega_ge)".into(),
            ));
        }
        if !(self.t_cold >= 0.0) || !(self.t_hot >= 0.0) {
            return Err(SimError::InvalidParameter("temperatures must be non-negative".into()));
        }
        if self.t_hot < self.t_cold {
            return Err(SimError::InvalidParameter(format!(
                "hot bath ({} K) must be at least as warm as the cold bath ({} K)",
                self.t_hot, self.t_cold
            )));
        }
        if !(self.kappa_c > 0.0) {
            return Err(SimError::InvalidParameter(
                "kappa_c must be positive (it sets the time unit)".into(),
            ));
        }
        for (name, v) in [
            ("g3", self.g3),
            ("kappa_h", self.kappa_h),
            ("gamma_es", self.gamma_es),
            ("gamma_sg", self.gamma_sg),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(SimError::InvalidParameter(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if !(self.resonance_tolerance >= 0.0) {
            return Err(SimError::InvalidParameter(
                "resonance tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Exchange mismatch r = ω_ge + ω_C − ω_H (angular).
    pub fn resonance_residual(&self) -> f64 {
        self.omega_ge + self.omega_c - self.omega_h
    }
}

/// Basis index of |λ, c, h⟩ with λ ∈ {g,s,e}, c,h ∈ {0,1}: (λ·2 + c)·2 + h.
pub fn clock_index(level: usize, cold: usize, hot: usize) -> usize {
    (level * 2 + cold) * 2 + hot
}

/// Hilbert-space dimension of the clock: 3 × 2 × 2.
pub const CLOCK_DIM: usize = 12;

#[derive(Debug, Clone)]
pub struct ClockModel {
    /// κ_C-normalized open-system model.
    pub model: LindbladModel,
    /// Index of the tick channel in `model.channels()`.
    pub tick_channel: usize,
    /// Exchange mismatch r = ω_ge + ω_C − ω_H (angular, SI).
    pub resonance_residual: f64,
    /// Simulation-time unit: multiply SI seconds by this to get model time.
    pub time_scale: f64,
    /// Mean occupation the cold bath imposes on its qubit.
    pub thermal_cold: f64,
    /// Mean occupation the hot bath imposes on its qubit.
    pub thermal_hot: f64,
    /// Set when the exchange is detuned beyond the configured tolerance.
    pub warning: Option<String>,
}

/// Assemble the κ_C-normalized Lindblad model of the clock.
pub fn build_clock_model(params: &ClockParams) -> Result<ClockModel> {
    params.validate()?;
    let n_cold = thermal_occupation(params.omega_c, params.t_cold)?;
    let n_hot = thermal_occupation(params.omega_h, params.t_hot)?;
    let k = params.kappa_c;

    let r = params.resonance_residual();
    let warning = if r.abs() > params.resonance_tolerance * params.omega_h {
        Some(format!(
            "exchange detuned by {:.3e} rad/s ({:+.2e} of the hot gap); treating it as a \
             static shift of the doubly-excited exchange state",
            r,
            r / params.omega_h
        ))
    } else {
        None
    };

    // Exchange |e,1,0⟩⟨g,0,1| + h.c., plus the static mismatch term.
    let upper = clock_index(LEVEL_E, 1, 0);
    let lower = clock_index(LEVEL_G, 0, 1);
    let mut h = Array2::<C64>::zeros((CLOCK_DIM, CLOCK_DIM));
    let g = C64::new(params.g3 / k, 0.0);
    h[[upper, lower]] = g;
    h[[lower, upper]] = g;
    h[[upper, upper]] = C64::new(r / k, 0.0);

    let id2 = matrices::identity(2);
    let id3 = matrices::identity(3);
    let lower_c = kron(&id3, &kron(&matrices::ketbra(2, 0, 1), &id2));
    let raise_c = kron(&id3, &kron(&matrices::ketbra(2, 1, 0), &id2));
    let lower_h = kron(&id3, &kron(&id2, &matrices::ketbra(2, 0, 1)));
    let raise_h = kron(&id3, &kron(&id2, &matrices::ketbra(2, 1, 0)));
    let tick = kron(&matrices::ketbra(3, LEVEL_S, LEVEL_E), &matrices::identity(4));
    let reset = kron(&matrices::ketbra(3, LEVEL_G, LEVEL_S), &matrices::identity(4));

    let channels = vec![
        (Operator::general(lower_c)?, n_cold + 1.0),
        (Operator::general(raise_c)?, n_cold),
        (Operator::general(lower_h)?, (params.kappa_h / k) * (n_hot + 1.0)),
        (Operator::general(raise_h)?, (params.kappa_h / k) * n_hot),
        (Operator::general(tick)?, params.gamma_es / k),
        (Operator::general(reset)?, params.gamma_sg / k),
    ];

    Ok(ClockModel {
        model: LindbladModel::new(Operator::hermitian(h)?, channels)?,
        tick_channel: TICK_CHANNEL,
        resonance_residual: r,
        time_scale: k,
        thermal_cold: n_cold,
        thermal_hot: n_hot,
        warning,
    })
}

/// Draw an initial pure state: atom in |g⟩, each qubit excited with its
/// bath's Gibbs probability n̄/(2n̄ + 1).
pub fn sample_initial_state(clock: &ClockModel, rng: &mut impl Rng) -> StateVector {
    let p_cold = clock.thermal_cold / (2.0 * clock.thermal_cold + 1.0);
    let p_hot = clock.thermal_hot / (2.0 * clock.thermal_hot + 1.0);
    let c = usize::from(rng.gen::<f64>() < p_cold);
    let h = usize::from(rng.gen::<f64>() < p_hot);
    StateVector::basis(CLOCK_DIM, clock_index(LEVEL_G, c, h)).expect("valid index")
}

/// Pick the jump-integrator step from the stiffness of the drift matrix
/// A = −iH − ½ Σ rate·L†L.
fn jump_time_step(clock: &ClockModel) -> f64 {
    let mut a = clock.model.hamiltonian().matrix().mapv(|z| C64::new(z.im, -z.re));
    for (l, rate) in clock.model.channels() {
        let lm = l.matrix();
        let ll = linalg::dagger(lm).dot(lm);
        a.scaled_add(C64::new(-0.5 * rate, 0.0), &ll);
    }
    0.05 / linalg::one_norm(&a).max(1e-12)
}

/// Tick record of a single stochastic run.
#[derive(Debug, Clone)]
pub struct TickRecord {
    /// Tick emission times in SI seconds, strictly increasing.
    pub times: Vec<f64>,
    /// Requested duration (seconds).
    pub duration: f64,
    pub seed: u64,
}

/// Unravel one stochastic trajectory for `duration` seconds and return the
/// tick (e → s emission) times. The initial state is drawn from the Gibbs
/// weights of the two baths with the atom reset to |g⟩.
pub fn simulate_ticks(clock: &ClockModel, duration: f64, seed: u64) -> Result<TickRecord> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let psi0 = sample_initial_state(clock, &mut rng);
    let jump_seed: u64 = rng.gen();

    let t_sim = duration * clock.time_scale;
    let grid = TimeGrid::from_step(0.0, t_sim, jump_time_step(clock))?;
    let events = jump_events(&clock.model, &psi0, &grid, jump_seed)?;

    let times: Vec<f64> = events
        .iter()
        .filter(|e| e.channel == clock.tick_channel)
        .map(|e| e.time / clock.time_scale)
        .collect();
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::Numerical("tick times are not strictly increasing".into()));
    }
    Ok(TickRecord { times, duration, seed })
}

/// Steady-state tick flux in ticks per second: Γ_es × (population of |e⟩ in
/// the stationary state).
pub fn steady_tick_flux(clock: &ClockModel) -> Result<f64> {
    let rho = steady_state(&clock.model)?;
    let p_e: f64 = (0..4).map(|j| rho.population(8 + j)).sum();
    let gamma_es = clock.model.channels()[clock.tick_channel].1;
    Ok(gamma_es * p_e * clock.time_scale)
}

/// Stationary state of the clock (κ_C-normalized model).
pub fn clock_steady_state(clock: &ClockModel) -> Result<crate::sim::state::DensityOperator> {
    steady_state(&clock.model)
}

#[derive(Debug, Clone, Copy)]
pub struct EnsembleFlux {
    /// Ticks per second across the ensemble's counting windows.
    pub flux: f64,
    /// Total ticks counted after burn-in.
    pub ticks: u64,
    pub trajectories: usize,
}

/// Average tick flux over `n_traj` independent trajectories, counting only
/// ticks after `burn_in` seconds within a window of `window` seconds.
/// Trajectory k uses seed `base_seed + k`, so the ensemble is reproducible
/// and embarrassingly parallel.
pub fn ensemble_tick_flux(
    clock: &ClockModel,
    burn_in: f64,
    window: f64,
    n_traj: usize,
    base_seed: u64,
) -> Result<EnsembleFlux> {
    if n_traj == 0 {
        return Err(SimError::InvalidParameter("need at least one trajectory".into()));
    }
    if !(window > 0.0) || !(burn_in >= 0.0) {
        return Err(SimError::InvalidParameter(
            "burn-in must be non-negative and the window positive".into(),
        ));
    }
    let duration = burn_in + window;
    let counts: Result<Vec<u64>> = (0..n_traj)
        .into_par_iter()
        .map(|k| {
            let record = simulate_ticks(clock, duration, base_seed.wrapping_add(k as u64))?;
            Ok(record.times.iter().filter(|&&t| t > burn_in).count() as u64)
        })
        .collect();
    let counts = counts?;
    let ticks: u64 = counts.iter().sum();
    Ok(EnsembleFlux {
        flux: ticks as f64 / (n_traj as f64 * window),
        ticks,
        trajectories: n_traj,
    })
}

/// Summary statistics of the waiting times between consecutive ticks.
#[derive(Debug, Clone, Copy)]
pub struct TickStatistics {
    pub n_ticks: usize,
    /// Mean wait between ticks (seconds).
    pub mean_wait: f64,
    /// Population variance of the waits (seconds²).
    pub wait_variance: f64,
    /// Clock accuracy N = mean²/variance — the number of ticks after which
    /// the accumulated time uncertainty reaches one mean period. Capped at
    /// `ACCURACY_CAP` when the waits are numerically identical.
    pub accuracy: f64,
}

/// Wait-time statistics of a tick series (absolute times, seconds).
pub fn tick_statistics(ticks: &[f64]) -> Result<TickStatistics> {
    if ticks.len() < 2 {
        return Err(SimError::InsufficientData(format!(
            "need at least two ticks to measure waits, got {}",
            ticks.len()
        )));
    }
    let waits: Vec<f64> = ticks.windows(2).map(|w| w[1] - w[0]).collect();
    if waits.iter().any(|&w| w <= 0.0) {
        return Err(SimError::InvalidParameter("tick times must be strictly increasing".into()));
    }
    let n = waits.len() as f64;
    let mean = waits.iter().sum::<f64>() / n;
    let variance = waits.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / n;
    let accuracy = if variance > 0.0 {
        (mean * mean / variance).min(ACCURACY_CAP)
    } else {
        ACCURACY_CAP
    };
    Ok(TickStatistics { n_ticks: ticks.len(), mean_wait: mean, wait_variance: variance, accuracy })
}

#[derive(Debug, Clone, Copy)]
pub struct MetastableMargin {
    /// How many coherence times fit into one needed storage interval.
    pub ratio: f64,
    /// True when the ratio is at least 10.
    pub pass: bool,
}

/// Compare the available coherence (or metastable-lifetime) window against
/// the interval a protocol must bridge.
pub fn metastable_margin(available: f64, required: f64) -> Result<MetastableMargin> {
    if !(available > 0.0) || !(required > 0.0) {
        return Err(SimError::InvalidParameter(
            "both durations must be positive".into(),
        ));
    }
    let ratio = available / required;
    Ok(MetastableMargin { ratio, pass: ratio >= 10.0 })
}

/// How many ticks a rotation budget provides.
#[derive(Debug, Clone, Copy)]
pub enum TickBudget {
    /// A fixed number of ticks.
    Exact(u64),
    /// Normally distributed tick count, rounded and clamped at zero.
    Gaussian { mean: f64, std: f64 },
    /// Poisson-distributed tick count.
    Poisson { mean: f64 },
}

impl TickBudget {
    fn sample(&self, rng: &mut ChaCha12Rng) -> Result<u64> {
        match *self {
            TickBudget::Exact(n) => Ok(n),
            TickBudget::Gaussian { mean, std } => {
                let dist = Normal::new(mean, std).map_err(|e| {
                    SimError::InvalidParameter(format!("bad Gaussian budget: {e}"))
                })?;
                Ok(dist.sample(rng).round().max(0.0) as u64)
            }
            TickBudget::Poisson { mean } => {
                let dist = Poisson::new(mean).map_err(|e| {
                    SimError::InvalidParameter(format!("bad Poisson budget: {e}"))
                })?;
                Ok(dist.sample(rng) as u64)
            }
        }
    }
}

/// A rotation split into per-tick slices.
#[derive(Debug, Clone, Copy)]
pub struct FractionalPlan {
    pub target_angle: f64,
    /// Rotation advanced per tick: 2 g t_tick.
    pub per_tick_angle: f64,
    /// Ticks needed for the closest achievable total rotation (at least 1).
    pub ticks_required: u64,
    /// True when even a single tick rotates past the target.
    pub overshoot: bool,
}

/// Spread of the achieved rotation angle under a stochastic tick budget.
#[derive(Debug, Clone, Copy)]
pub struct AngleSpread {
    /// Mean signed error (achieved − target), radians.
    pub mean_error: f64,
    /// Root-mean-square error, radians.
    pub rms_error: f64,
    /// Fraction of samples whose budget fell short of the required ticks.
    pub shortfall_fraction: f64,
}

/// Slice a target rotation into per-tick pieces of angle 2·g·t_tick, then
/// Monte-Carlo the achieved angle when the number of delivered ticks is
/// drawn from `budget` (each sample uses min(budget, required) ticks).
pub fn fractional_gate_plan(
    target_angle: f64,
    coupling: f64,
    tick_interval: f64,
    budget: TickBudget,
    samples: usize,
    seed: u64,
) -> Result<(FractionalPlan, AngleSpread)> {
    if !(target_angle > 0.0) || !target_angle.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "target angle must be positive, got {target_angle}"
        )));
    }
    if !(coupling > 0.0) || !(tick_interval > 0.0) {
        return Err(SimError::InvalidParameter(
            "coupling and tick interval must be positive".into(),
        ));
    }
    if samples == 0 {
        return Err(SimError::InvalidParameter("need at least one budget sample".into()));
    }
    let per_tick = 2.0 * coupling * tick_interval;
    let ticks_required = ((target_angle / per_tick).round() as u64).max(1);
    let plan = FractionalPlan {
        target_angle,
        per_tick_angle: per_tick,
        ticks_required,
        overshoot: per_tick > target_angle,
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut short = 0usize;
    for _ in 0..samples {
        let available = budget.sample(&mut rng)?;
        if available < ticks_required {
            short += 1;
        }
        let used = available.min(ticks_required);
        let err = used as f64 * per_tick - target_angle;
        sum += err;
        sum_sq += err * err;
    }
    let n = samples as f64;
    let spread = AngleSpread {
        mean_error: sum / n,
        rms_error: (sum_sq / n).sqrt(),
        shortfall_fraction: short as f64 / n,
    };
    Ok((plan, spread))
}
