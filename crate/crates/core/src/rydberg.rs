//! Rydberg-blockade entangling gates on a pair of neutral atoms.
//!
//! Each atom carries three levels: the qubit states |0⟩, |1⟩ and a Rydberg
//! level |r⟩. The two-atom Hilbert space is nine-dimensional with basis index
//! `3*control + target` and level order (0, 1, r). Two protocols are
//! implemented:
//!
//! * the three-pulse blockade gate (π on control, 2π on target, π on
//!   control), which realizes CZ when the |rr⟩ interaction shift dominates;
//! * the Levine-Pichler two-pulse gate, which drives both atoms globally and
//!   uses a laser phase jump between two detuned pulses to close the
//!   single-atom trajectory.
//!
//! Pulses are square, so each segment propagator is an exact Hermitian
//! matrix exponential.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Result, SimError};
use crate::linalg::expm_hermitian;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Levels per atom: |0⟩, |1⟩, |r⟩.
pub const LEVELS: usize = 3;
/// Index of the Rydberg level within one atom.
pub const RYDBERG: usize = 2;
/// Two-atom Hilbert-space dimension.
pub const PAIR_DIM: usize = LEVELS * LEVELS;

/// Basis index of |control, target⟩.
pub fn pair_index(control: usize, target: usize) -> usize {
    debug_assert!(control < LEVELS && target < LEVELS);
    LEVELS * control + target
}

/// The four computational basis states in gate order: 00, 01, 10, 11.
pub const COMPUTATIONAL: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Interaction shift of the doubly excited state |rr⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockadeShift {
    /// Infinite shift: |rr⟩ is projected out of the dynamics entirely.
    Hard,
    /// Finite shift V (angular); the |rr⟩ couplings stay active.
    Finite(f64),
}

#[derive(Debug, Clone)]
pub struct BlockadeParams {
    /// Rabi frequency Ω of the |1⟩ ↔ |r⟩ drive (angular), must be positive.
    pub rabi: f64,
    /// Detuning Δ of the drive from the |1⟩ → |r⟩ transition (angular).
    pub detuning: f64,
    pub shift: BlockadeShift,
}

impl BlockadeParams {
    /// Resonant drive with a hard blockade: the textbook CZ limit.
    pub fn hard(rabi: f64) -> Result<Self> {
        let p = Self { rabi, detuning: 0.0, shift: BlockadeShift::Hard };
        p.validate()?;
        Ok(p)
    }

    /// Resonant drive with a finite |rr⟩ shift.
    pub fn finite(rabi: f64, shift: f64) -> Result<Self> {
        let p = Self { rabi, detuning: 0.0, shift: BlockadeShift::Finite(shift) };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi > 0.0) || !self.rabi.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "Rabi frequency must be positive, got {}",
                self.rabi
            )));
        }
        if !self.detuning.is_finite() {
            return Err(SimError::InvalidParameter("detuning must be finite".into()));
        }
        if let BlockadeShift::Finite(v) = self.shift {
            if !v.is_finite() {
                return Err(SimError::InvalidParameter("blockade shift must be finite".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Atom {
    Control,
    Target,
}

/// Drive Hamiltonian for a square pulse on one atom:
/// (Ω/2)(|1⟩⟨r| + h.c.) - Δ|r⟩⟨r| on the driven atom, plus the |rr⟩ shift.
/// Under a hard blockade every element in the |rr⟩ row and column is zero,
/// which removes the couplings into |rr⟩ and leaves it stationary.
fn drive_hamiltonian(atom: Atom, params: &BlockadeParams) -> Array2<C64> {
    let mut h = Array2::<C64>::zeros((PAIR_DIM, PAIR_DIM));
    let half = C64::new(params.rabi / 2.0, 0.0);
    let rr = pair_index(RYDBERG, RYDBERG);
    for other in 0..LEVELS {
        let (one, ryd) = match atom {
            Atom::Control => (pair_index(1, other), pair_index(RYDBERG, other)),
            Atom::Target => (pair_index(other, 1), pair_index(other, RYDBERG)),
        };
        if params.shift == BlockadeShift::Hard && (one == rr || ryd == rr) {
            continue;
        }
        h[[one, ryd]] = half;
        h[[ryd, one]] = half;
        h[[ryd, ryd]] = C64::new(-params.detuning, 0.0);
    }
    match params.shift {
        BlockadeShift::Hard => h[[rr, rr]] = C64::new(0.0, 0.0),
        BlockadeShift::Finite(v) => h[[rr, rr]] += C64::new(v, 0.0),
    }
    h
}

/// Full 9x9 propagator of the three-pulse sequence
/// π(control) → 2π(target) → π(control) with square pulses of durations
/// π/Ω, 2π/Ω, π/Ω.
pub fn blockade_cz_unitary(params: &BlockadeParams) -> Result<Array2<C64>> {
    params.validate()?;
    let h_c = drive_hamiltonian(Atom::Control, params);
    let h_t = drive_hamiltonian(Atom::Target, params);
    let t_pi = PI / params.rabi;
    let u1 = expm_hermitian(&h_c, C64::new(0.0, -t_pi))?;
    let u2 = expm_hermitian(&h_t, C64::new(0.0, -2.0 * t_pi))?;
    Ok(u1.dot(&u2).dot(&u1))
}

/// Phases and leakages of the four computational inputs after a gate.
#[derive(Debug, Clone)]
pub struct ConditionalPhaseTable {
    /// arg⟨input|U|input⟩ for inputs 00, 01, 10, 11.
    pub phases: [f64; 4],
    /// 1 - |⟨input|U|input⟩|² for the same inputs.
    pub leakage: [f64; 4],
}

impl ConditionalPhaseTable {
    fn from_unitary(u: &Array2<C64>, indices: [usize; 4]) -> Self {
        let mut phases = [0.0; 4];
        let mut leakage = [0.0; 4];
        for (k, &idx) in indices.iter().enumerate() {
            let amp = u[[idx, idx]];
            phases[k] = if amp.norm() > 1e-300 { amp.arg() } else { 0.0 };
            leakage[k] = (1.0 - amp.norm_sqr()).max(0.0);
        }
        Self { phases, leakage }
    }

    /// The entangling phase φ00 - φ01 - φ10 + φ11, wrapped to (-π, π].
    pub fn conditional_phase(&self) -> f64 {
        wrap_phase(self.phases[0] - self.phases[1] - self.phases[2] + self.phases[3])
    }

    /// Phases relative to the 00 input, wrapped to (-π, π].
    pub fn relative_phases(&self) -> [f64; 4] {
        let p0 = self.phases[0];
        [
            0.0,
            wrap_phase(self.phases[1] - p0),
            wrap_phase(self.phases[2] - p0),
            wrap_phase(self.phases[3] - p0),
        ]
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().cloned().fold(0.0, f64::max)
    }
}

/// Wrap an angle to (-π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

/// Run the three-pulse blockade gate and report the computational phases.
pub fn blockade_cz(params: &BlockadeParams) -> Result<ConditionalPhaseTable> {
    let u = blockade_cz_unitary(params)?;
    let indices = COMPUTATIONAL.map(|(c, t)| pair_index(c, t));
    Ok(ConditionalPhaseTable::from_unitary(&u, indices))
}

/// Average gate fidelity of the three-pulse sequence against ideal CZ
/// (diag(1, -1, -1, -1) on 00, 01, 10, 11):
/// F = [Tr(M M†) + |Tr(G† M)|²] / 20 with M the propagator restricted to the
/// computational subspace.
pub fn blockade_cz_fidelity(params: &BlockadeParams) -> Result<f64> {
    let u = blockade_cz_unitary(params)?;
    let indices = COMPUTATIONAL.map(|(c, t)| pair_index(c, t));
    let mut m = Array2::<C64>::zeros((4, 4));
    for (i, &bi) in indices.iter().enumerate() {
        for (j, &bj) in indices.iter().enumerate() {
            m[[i, j]] = u[[bi, bj]];
        }
    }
    let cz = [1.0, -1.0, -1.0, -1.0];
    let mut trace_mm = 0.0;
    for z in m.iter() {
        trace_mm += z.norm_sqr();
    }
    let mut trace_gm = C64::new(0.0, 0.0);
    for i in 0..4 {
        trace_gm += cz[i] * m[[i, i]];
    }
    Ok(((trace_mm + trace_gm.norm_sqr()) / 20.0).clamp(0.0, 1.0))
}

/// Detuning-to-Rabi ratio used by the standard two-pulse gate.
pub const LP_DETUNING_RATIO: f64 = 0.377;
/// Published optimum of the same protocol, kept for reference checks.
pub const LP_REFERENCE_DETUNING_RATIO: f64 = 0.377371;
/// Published laser phase jump at the reference detuning ratio.
pub const LP_REFERENCE_PHASE_OFFSET: f64 = 3.90242;

/// Parameters of the Levine-Pichler two-pulse gate. Both atoms see the same
/// global drive; the blockade is taken as hard, so the doubly excited state
/// never participates.
#[derive(Debug, Clone)]
pub struct LevinePichlerParams {
    /// Rabi frequency Ω (angular), positive.
    pub rabi: f64,
    /// Drive detuning Δ (angular), positive for the standard gate.
    pub detuning: f64,
    /// Laser phase jump ξ applied to the second pulse.
    pub phase_offset: f64,
    /// Acceptable single-atom return leakage after both pulses.
    pub max_leakage: f64,
}

impl LevinePichlerParams {
    /// The standard operating point: Δ = 0.377 Ω and ξ solved so the
    /// singly-driven sector returns exactly.
    pub fn standard(rabi: f64) -> Result<Self> {
        if !(rabi > 0.0) || !rabi.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "Rabi frequency must be positive, got {rabi}"
            )));
        }
        let xi = solve_phase_offset(LP_DETUNING_RATIO)?;
        Ok(Self {
            rabi,
            detuning: LP_DETUNING_RATIO * rabi,
            phase_offset: xi,
            max_leakage: 1e-3,
        })
    }

    /// Single-pulse duration τ = 2π/√(Δ² + 2Ω²): the doubly-driven sector,
    /// whose coupling is enhanced to √2 Ω, completes one full detuned Rabi
    /// cycle per pulse.
    pub fn pulse_duration(&self) -> f64 {
        TAU / (self.detuning * self.detuning + 2.0 * self.rabi * self.rabi).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi > 0.0) || !self.rabi.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "Rabi frequency must be positive, got {}",
                self.rabi
            )));
        }
        if !self.detuning.is_finite() || !self.phase_offset.is_finite() {
            return Err(SimError::InvalidParameter(
                "detuning and phase offset must be finite".into(),
            ));
        }
        if !(self.max_leakage > 0.0) {
            return Err(SimError::InvalidParameter(
                "leakage budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// 2x2 propagator of one square pulse in a driven sector
/// {|qubit⟩, |excited⟩}: H = [[0, (Ω_eff/2)e^{iξ}], [(Ω_eff/2)e^{-iξ}, -Δ]],
/// with ξ the laser phase advance of the pulse.
fn sector_pulse(rabi_eff: f64, detuning: f64, xi: f64, duration: f64) -> Result<Array2<C64>> {
    let half = C64::from_polar(rabi_eff / 2.0, xi);
    let mut h = Array2::<C64>::zeros((2, 2));
    h[[0, 1]] = half;
    h[[1, 0]] = half.conj();
    h[[1, 1]] = C64::new(-detuning, 0.0);
    expm_hermitian(&h, C64::new(0.0, -duration))
}

/// Return amplitude ⟨qubit|U₂(ξ)U₁(0)|qubit⟩ of one sector after both pulses.
fn sector_return(rabi_eff: f64, detuning: f64, xi: f64, duration: f64) -> Result<C64> {
    let u1 = sector_pulse(rabi_eff, detuning, 0.0, duration)?;
    let u2 = sector_pulse(rabi_eff, detuning, xi, duration)?;
    let u = u2.dot(&u1);
    Ok(u[[0, 0]])
}

/// Solve for the laser phase jump ξ ∈ [0, 2π) that closes the singly-driven
/// sector after two pulses, i.e. minimizes its return leakage
/// 1 - |⟨01|U₂U₁|01⟩|². Coarse 4096-point scan plus golden-section
/// refinement; the residual leakage at the solution must be < 1e-10.
pub fn solve_phase_offset(detuning_ratio: f64) -> Result<f64> {
    if !detuning_ratio.is_finite() || detuning_ratio <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "detuning ratio must be positive, got {detuning_ratio}"
        )));
    }
    // Work in units of Ω = 1; leakage depends only on the ratio.
    let rabi = 1.0;
    let detuning = detuning_ratio;
    let duration = TAU / (detuning * detuning + 2.0 * rabi * rabi).sqrt();
    let leakage = |xi: f64| -> Result<f64> {
        let amp = sector_return(rabi, detuning, xi, duration)?;
        Ok((1.0 - amp.norm_sqr()).max(0.0))
    };

    let n = 4096;
    let mut best_k = 0;
    let mut best_l = f64::INFINITY;
    for k in 0..n {
        let l = leakage(TAU * k as f64 / n as f64)?;
        if l < best_l {
            best_l = l;
            best_k = k;
        }
    }
    let mut a = TAU * (best_k as f64 - 1.0) / n as f64;
    let mut b = TAU * (best_k as f64 + 1.0) / n as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = leakage(x1)?;
    let mut f2 = leakage(x2)?;
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = leakage(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = leakage(x2)?;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    let xi = 0.5 * (a + b);
    let residual = leakage(xi)?;
    if residual > 1e-10 {
        return Err(SimError::IncompleteReturn(format!(
            "no phase jump closes the driven sector at ratio {detuning_ratio}: \
             best leakage {residual:.3e}"
        )));
    }
    Ok(xi.rem_euclid(TAU))
}

#[derive(Debug, Clone)]
pub struct LevinePichlerReport {
    /// Return phases of 00, 01, 10, 11 (00 is undriven, so 0; 10 equals 01).
    pub phases: [f64; 4],
    /// Return leakage of the same inputs.
    pub leakage: [f64; 4],
    /// φ00 - φ01 - φ10 + φ11, wrapped to (-π, π].
    pub conditional_phase: f64,
    /// Duration of each of the two pulses.
    pub pulse_duration: f64,
    /// Total gate duration (two pulses).
    pub total_duration: f64,
}

/// Evolve the two driven sectors of the two-pulse gate and report phases,
/// leakages and the conditional phase. Fails with `IncompleteReturn` if
/// either sector leaks more than `params.max_leakage`.
pub fn levine_pichler(params: &LevinePichlerParams) -> Result<LevinePichlerReport> {
    params.validate()?;
    let tau = params.pulse_duration();
    // |01⟩ (and |10⟩ by symmetry) couples to its own Rydberg state at Ω;
    // |11⟩ couples to the symmetric singly-excited state at √2 Ω.
    let single = sector_return(params.rabi, params.detuning, params.phase_offset, tau)?;
    let double =
        sector_return(2f64.sqrt() * params.rabi, params.detuning, params.phase_offset, tau)?;

    let phases = [0.0, single.arg(), single.arg(), double.arg()];
    let leakage = [
        0.0,
        (1.0 - single.norm_sqr()).max(0.0),
        (1.0 - single.norm_sqr()).max(0.0),
        (1.0 - double.norm_sqr()).max(0.0),
    ];
    let worst = leakage.iter().cloned().fold(0.0, f64::max);
    if worst > params.max_leakage {
        return Err(SimError::IncompleteReturn(format!(
            "sector leakage {worst:.3e} exceeds the budget {:.1e}",
            params.max_leakage
        )));
    }
    Ok(LevinePichlerReport {
        phases,
        leakage,
        conditional_phase: wrap_phase(phases[0] - phases[1] - phases[2] + phases[3]),
        pulse_duration: tau,
        total_duration: 2.0 * tau,
    })
}

/// Rabi frequency that realizes a requested single-pulse duration at a given
/// detuning ratio: inverts τ = 2π/√(Δ² + 2Ω²) with Δ = ratio·Ω.
pub fn back_solve_rabi(pulse_duration: f64, detuning_ratio: f64) -> Result<f64> {
    if !(pulse_duration > 0.0) || !pulse_duration.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "pulse duration must be positive, got {pulse_duration}"
        )));
    }
    if !detuning_ratio.is_finite() || detuning_ratio < 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "detuning ratio must be non-negative, got {detuning_ratio}"
        )));
    }
    Ok(TAU / pulse_duration / (2.0 + detuning_ratio * detuning_ratio).sqrt())
}

/// Exchange-coupled pair amplitudes: starting from |01⟩ with coupling
/// H = J(|01⟩⟨10| + h.c.), the amplitudes at time t are
/// (⟨01|ψ⟩, ⟨10|ψ⟩) = (cos Jt, -i sin Jt).
pub fn ultrafast_amplitudes(exchange: f64, t: f64) -> (C64, C64) {
    let angle = exchange * t;
    (C64::new(angle.cos(), 0.0), C64::new(0.0, -angle.sin()))
}

/// One-way optical path length corresponding to a signal delay through a
/// medium of the given refractive index: d = c·delay/n.
pub fn clock_laser_distance(delay: f64, refractive_index: f64) -> Result<f64> {
    if !(delay > 0.0) || !delay.is_finite() {
        return Err(SimError::Geometry(format!("delay must be positive, got {delay}")));
    }
    if !(refractive_index >= 1.0) || !refractive_index.is_finite() {
        return Err(SimError::Geometry(format!(
            "refractive index must be >= 1, got {refractive_index}"
        )));
    }
    Ok(SPEED_OF_LIGHT * delay / refractive_index)
}
