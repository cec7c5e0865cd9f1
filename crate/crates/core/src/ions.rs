//! Trapped-ion entangling dynamics and beam-geometry schedules.
//!
//! The centerpiece is a Mølmer–Sørensen simulation: two spins couple to one
//! shared motional mode through a bichromatic drive whose tones sit just
//! inside the red and blue sidebands. In the interaction picture the
//! Hamiltonian is
//!
//! ```text
//!   H(t) = -(ηΩ/2) · S_x ⊗ (a† e^{iδt} + a e^{-iδt}),   S_x = σx⊗I + I⊗σx
//! ```
//!
//! The spin-dependent displacement traces a closed loop in phase space after
//! t = 2π/δ; with the drive set to the closure condition ηΩ = δ/2 the loop
//! encloses exactly the area of a maximally entangling gate, taking
//! |↓↓⟩ → (|↓↓⟩ + i|↑↑⟩)/√2 (with |↓⟩ ≡ |1⟩, |↑⟩ ≡ |0⟩).
//!
//! The remaining operations are small closed-form schedules for transporting
//! ions through laser beams: a straight "slide" pass and a ring trap whose
//! two illuminated arcs chop the drive into a duty-cycled pulse train.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};
use crate::linalg::kron;
use crate::sim::lindblad::integrate_lindblad;
use crate::sim::operator::{matrices, LindbladModel, Operator};
use crate::sim::pulse::TimeGrid;
use crate::sim::schrodinger::integrate_schrodinger;
use crate::sim::state::{DensityOperator, StateVector};

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Population allowed at the motional truncation edge.
pub const TRUNCATION_TOL: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct MsParams {
    /// Qubit gap ω₀ (angular). Bookkeeping only: the dynamics run in the
    /// interaction picture.
    pub qubit_gap: f64,
    /// Shared-mode frequency ν (angular). Bookkeeping only, as above.
    pub mode_freq: f64,
    /// Sideband detuning δ (angular); the gate closes at t = 2π/δ.
    pub detuning: f64,
    /// Lamb–Dicke parameter η ≥ 0.
    pub lamb_dicke: f64,
    /// Carrier Rabi frequency Ω (angular).
    pub rabi: f64,
    /// Motional Fock-space truncation (states 0..=n_max).
    pub n_max: usize,
    /// Integration steps across one gate time.
    pub n_steps: usize,
}

impl MsParams {
    /// Benhelm-experiment frequencies with the single-loop closure condition
    /// ηΩ = δ/2 and η = 0.05.
    pub fn benhelm(n_max: usize) -> Result<Self> {
        let delta = TAU * 20e3;
        let eta = 0.05;
        let p = Self {
            qubit_gap: TAU * 411e12,
            mode_freq: TAU * 1.23e6,
            detuning: delta,
            lamb_dicke: eta,
            rabi: delta / (2.0 * eta),
            n_max,
            n_steps: 8192,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(SimError::InvalidParameter(format!(
                "motional truncation must be at least 2, got {}",
                self.n_max
            )));
        }
        if !(self.lamb_dicke >= 0.0) || !self.lamb_dicke.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "Lamb–Dicke parameter must be non-negative, got {}",
                self.lamb_dicke
            )));
        }
        if self.detuning == 0.0 || !self.detuning.is_finite() {
            return Err(SimError::InvalidParameter(
                "sideband detuning must be nonzero".into(),
            ));
        }
        if !(self.rabi >= 0.0) || !self.rabi.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "carrier Rabi frequency must be non-negative, got {}",
                self.rabi
            )));
        }
        if self.n_steps < 16 {
            return Err(SimError::InvalidParameter(
                "need at least 16 integration steps".into(),
            ));
        }
        Ok(())
    }

    /// Loop-closure (gate) time 2π/|δ| — 1/δ in cyclic-frequency terms.
    pub fn gate_time(&self) -> f64 {
        TAU / self.detuning.abs()
    }

    /// Fock-space size per spin configuration.
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Full Hilbert-space dimension: (2 spins)² × Fock.
    pub fn dim(&self) -> usize {
        4 * self.fock_dim()
    }

    /// |↓↓, n=0⟩: both spins in |1⟩, motional ground state.
    pub fn default_initial(&self) -> StateVector {
        StateVector::basis(self.dim(), 3 * self.fock_dim()).expect("valid index")
    }
}

/// Observables sampled along a Mølmer–Sørensen evolution. Index convention:
/// amplitude of |s₁ s₂, n⟩ lives at (2 s₁ + s₂)·(n_max+1) + n.
#[derive(Debug, Clone)]
pub struct MsTrajectory {
    pub times: Vec<f64>,
    /// Overlap of the reduced spin state with (|↓↓⟩ + i|↑↑⟩)/√2.
    pub fidelity: Vec<f64>,
    /// Purity of the reduced motional state, Tr(ρ_m²).
    pub motional_purity: Vec<f64>,
    /// Mean motional occupation ⟨a†a⟩.
    pub mean_occupation: Vec<f64>,
    /// Population of the odd-parity spin states |↑↓⟩, |↓↑⟩.
    pub odd_parity_population: Vec<f64>,
    pub final_state: StateVector,
}

impl MsTrajectory {
    pub fn closure_fidelity(&self) -> f64 {
        *self.fidelity.last().expect("non-empty trajectory")
    }

    pub fn closure_occupation(&self) -> f64 {
        *self.mean_occupation.last().expect("non-empty trajectory")
    }
}

/// Overlap of the spin part of `psi` with (|↓↓⟩ + i|↑↑⟩)/√2, traced over the
/// motional mode: Σₙ |⟨target, n|ψ⟩|².
fn target_fidelity(psi: &Array1<C64>, fock: usize) -> f64 {
    let c_up = C64::new(0.0, 1.0 / 2f64.sqrt()); // amplitude on |↑↑⟩ = q0
    let c_dn = C64::new(1.0 / 2f64.sqrt(), 0.0); // amplitude on |↓↓⟩ = q3
    let mut f = 0.0;
    for n in 0..fock {
        let overlap = c_up.conj() * psi[n] + c_dn.conj() * psi[3 * fock + n];
        f += overlap.norm_sqr();
    }
    f
}

/// Evolve the bichromatic spin–motion dynamics from `initial` (defaults to
/// |↓↓, 0⟩) across one closed loop, recording the target fidelity, reduced
/// motional purity, mean occupation and parity leakage.
///
/// Fails with a truncation error if the population of the edge Fock state
/// exceeds 1e-4 anywhere along the recorded trajectory.
pub fn ms_evolve(params: &MsParams, initial: Option<&StateVector>) -> Result<MsTrajectory> {
    params.validate()?;
    let fock = params.fock_dim();
    let dim = params.dim();
    let default_initial;
    let psi0 = match initial {
        Some(s) => {
            if s.dim() != dim {
                return Err(SimError::InvalidState(format!(
                    "initial state has dimension {}, model needs {dim}",
                    s.dim()
                )));
            }
            s
        }
        None => {
            default_initial = params.default_initial();
            &default_initial
        }
    };

    // S_x ⊗ a† and its adjoint, built once; H(t) phases them.
    let sx2 = {
        let sx = matrices::pauli_x();
        let id = matrices::identity(2);
        kron(&sx, &id) + kron(&id, &sx)
    };
    let raise = kron(&sx2, &matrices::creation(params.n_max));
    let lower = raise.t().mapv(|z| z.conj());

    let coeff = -params.lamb_dicke * params.rabi / 2.0;
    let delta = params.detuning;
    let h = move |t: f64| -> Array2<C64> {
        let z = C64::from_polar(coeff, delta * t);
        raise.mapv(|x| x * z) + lower.mapv(|x| x * z.conj())
    };

    let grid = TimeGrid::with_steps(0.0, params.gate_time(), params.n_steps)?;
    let traj = integrate_schrodinger(h, psi0, &grid)?;

    let stride = (params.n_steps / 256).max(1);
    let mut times = Vec::new();
    let mut fidelity = Vec::new();
    let mut motional_purity = Vec::new();
    let mut mean_occupation = Vec::new();
    let mut odd_parity = Vec::new();
    for (k, state) in traj.states.iter().enumerate() {
        if k % stride != 0 && k != params.n_steps {
            continue;
        }
        let psi = state.amplitudes();
        let edge: f64 = (0..4).map(|q| psi[q * fock + fock - 1].norm_sqr()).sum();
        if edge > TRUNCATION_TOL {
            return Err(SimError::Truncation(format!(
                "edge Fock population {edge:.2e} at t = {:.3e}; raise n_max",
                traj.times[k]
            )));
        }
        times.push(traj.times[k]);
        fidelity.push(target_fidelity(psi, fock));
        let mut rho_m = Array2::<C64>::zeros((fock, fock));
        for q in 0..4 {
            for n in 0..fock {
                for m in 0..fock {
                    rho_m[[n, m]] += psi[q * fock + n] * psi[q * fock + m].conj();
                }
            }
        }
        motional_purity.push(rho_m.iter().map(|z| z.norm_sqr()).sum());
        mean_occupation.push(
            (0..4)
                .flat_map(|q| (0..fock).map(move |n| (q, n)))
                .map(|(q, n)| n as f64 * psi[q * fock + n].norm_sqr())
                .sum(),
        );
        odd_parity.push(
            (0..fock)
                .map(|n| psi[fock + n].norm_sqr() + psi[2 * fock + n].norm_sqr())
                .sum(),
        );
    }

    Ok(MsTrajectory {
        times,
        fidelity,
        motional_purity,
        mean_occupation,
        odd_parity_population: odd_parity,
        final_state: traj.final_state().clone(),
    })
}

/// Time an ion with speed `speed` spends inside a beam of diameter
/// `diameter`: t = D/v.
pub fn slide_exposure_time(speed: f64, diameter: f64) -> Result<f64> {
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(SimError::InvalidParameter(format!("speed must be positive, got {speed}")));
    }
    if !(diameter >= 0.0) || !diameter.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "beam diameter must be non-negative, got {diameter}"
        )));
    }
    Ok(diameter / speed)
}

/// Beam diameter needed for a given exposure time: D = v·t.
pub fn slide_beam_diameter(speed: f64, exposure: f64) -> Result<f64> {
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(SimError::InvalidParameter(format!("speed must be positive, got {speed}")));
    }
    if !(exposure >= 0.0) || !exposure.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "exposure time must be non-negative, got {exposure}"
        )));
    }
    Ok(speed * exposure)
}

/// Differential light shift of a far-detuned drive: δ = Ω²/(2Δ).
pub fn light_shift(rabi: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(SimError::InvalidParameter("light-shift detuning must be nonzero".into()));
    }
    if !rabi.is_finite() {
        return Err(SimError::InvalidParameter("Rabi frequency must be finite".into()));
    }
    Ok(rabi * rabi / (2.0 * detuning))
}

#[derive(Debug, Clone)]
pub struct RingParams {
    /// Ring radius (length units).
    pub radius: f64,
    /// Rotation frequency of the ions around the ring (cyclic, revolutions
    /// per unit time).
    pub rotation_freq: f64,
    /// Chord length of the beam across the ring.
    pub chord: f64,
    /// Total gate duration.
    pub gate_duration: f64,
    /// Decay rate of the driven transition (1/time).
    pub decay_rate: f64,
    /// Rabi frequency of the drive inside the beam (angular).
    pub rabi: f64,
}

impl RingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !(self.rotation_freq > 0.0) || !(self.gate_duration > 0.0) {
            return Err(SimError::InvalidParameter(
                "ring radius, rotation frequency and duration must be positive".into(),
            ));
        }
        if !(self.chord >= 0.0) {
            return Err(SimError::InvalidParameter("beam chord must be non-negative".into()));
        }
        if self.chord > 2.0 * self.radius {
            return Err(SimError::Geometry(format!(
                "beam chord {} exceeds the ring diameter {}",
                self.chord,
                2.0 * self.radius
            )));
        }
        if !(self.decay_rate >= 0.0) || !(self.rabi >= 0.0) {
            return Err(SimError::InvalidParameter(
                "decay rate and Rabi frequency must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Beam-crossing geometry for the ring gate.
#[derive(Debug, Clone)]
pub struct RingSchedule {
    /// Revolutions completed during one gate.
    pub passes: f64,
    /// Angle subtended by the beam at the ring center, θ = 2 arcsin(l/2r).
    pub subtended_angle: f64,
    /// Illuminated fraction of each revolution (two arcs): 2θ/2π.
    pub illuminated_fraction: f64,
    /// Integrated pulse area Ω · duration · fraction.
    pub pulse_area: f64,
}

pub fn ring_schedule(params: &RingParams) -> Result<RingSchedule> {
    params.validate()?;
    let theta = 2.0 * (params.chord / (2.0 * params.radius)).asin();
    let fraction = theta / PI;
    Ok(RingSchedule {
        passes: params.gate_duration * params.rotation_freq,
        subtended_angle: theta,
        illuminated_fraction: fraction,
        pulse_area: params.rabi * params.gate_duration * fraction,
    })
}

/// Outcome of the duty-cycled ring drive against its continuous-drive
/// reference of equal integrated area.
#[derive(Debug, Clone)]
pub struct RingGateReport {
    pub schedule: RingSchedule,
    /// Final |↑⟩ population under the chopped drive.
    pub excited_population: f64,
    /// Final |↑⟩ population under the continuous reference.
    pub continuous_population: f64,
    /// Uhlmann fidelity between the two final states.
    pub fidelity_vs_continuous: f64,
}

/// Uhlmann fidelity between two qubit states:
/// F = Tr(ρσ) + 2√(det ρ · det σ).
pub fn two_level_fidelity(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(SimError::InvalidState(
            "the closed-form fidelity applies to qubit states only".into(),
        ));
    }
    let (ma, mb) = (a.matrix(), b.matrix());
    let tr_prod: C64 = ma.dot(mb).diag().iter().sum();
    let det = |m: &Array2<C64>| (m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]]).re.max(0.0);
    Ok((tr_prod.re + 2.0 * (det(ma) * det(mb)).sqrt()).clamp(0.0, 1.0))
}

/// Integrate the two-level dynamics for `duration` with Rabi drive `rabi`
/// (zero for dark segments) and decay `gamma` from |↑⟩ (index 0) to |↓⟩.
fn ring_segment(rho: DensityOperator, rabi: f64, gamma: f64, duration: f64) -> Result<DensityOperator> {
    if duration <= 0.0 {
        return Ok(rho);
    }
    let h = matrices::pauli_x().mapv(|z| z * (rabi / 2.0));
    let channels = if gamma > 0.0 {
        vec![(Operator::general(matrices::ketbra(2, 1, 0))?, gamma)]
    } else {
        Vec::new()
    };
    let model = LindbladModel::new(Operator::hermitian(h)?, channels)?;
    let scale = rabi.abs().max(gamma).max(1.0 / duration);
    let grid = TimeGrid::from_step(0.0, duration, 0.02 / scale)?;
    let traj = integrate_lindblad(&model, &rho, &grid)?;
    Ok(traj.final_state().clone())
}

/// Simulate the duty-cycled drive an ion sees while circling the ring
/// (two illuminated arcs per revolution, at opposite sides), then the
/// continuous drive of equal integrated area, and compare the final states.
/// The ion starts in |↓⟩.
pub fn ring_pulsed_rabi(params: &RingParams) -> Result<RingGateReport> {
    let schedule = ring_schedule(params)?;
    let period = 1.0 / params.rotation_freq;
    let lit = schedule.subtended_angle / TAU * period;
    let dark = (PI - schedule.subtended_angle) / TAU * period;

    let mut rho = DensityOperator::from_pure(&StateVector::basis(2, 1)?);
    let mut elapsed = 0.0;
    let mut segment_is_lit = true;
    while elapsed < params.gate_duration - 1e-15 * params.gate_duration {
        let seg = if segment_is_lit { lit } else { dark };
        let step = seg.min(params.gate_duration - elapsed);
        let rabi = if segment_is_lit { params.rabi } else { 0.0 };
        rho = ring_segment(rho, rabi, params.decay_rate, step)?;
        elapsed += step;
        segment_is_lit = !segment_is_lit;
    }

    let continuous = ring_segment(
        DensityOperator::from_pure(&StateVector::basis(2, 1)?),
        params.rabi * schedule.illuminated_fraction,
        params.decay_rate,
        params.gate_duration,
    )?;

    Ok(RingGateReport {
        excited_population: rho.population(0),
        continuous_population: continuous.population(0),
        fidelity_vs_continuous: two_level_fidelity(&rho, &continuous)?,
        schedule,
    })
}
