//! Photon-triggered Z rotation from dispersive single-photon scattering.
//!
//! A qubit dispersively coupled to a one-sided cavity shifts the cavity
//! resonance by ±χ/2 depending on the qubit state. A single-photon wavepacket
//! u(t) reflecting off the cavity therefore picks up a qubit-conditioned
//! phase, which acts back on the qubit as a Z rotation. In the narrow-band
//! scattering description the qubit coherence and the two qubit-conditioned
//! intracavity amplitudes obey
//!
//! ```text
//!   d⟨σ⟩/dt = -i χ ⟨σ(t_start)⟩ a₊ a₋*
//!   i da₊/dt = [Δ + (χ - iγ)/2] a₊ - i√γ u(t)
//!   i da₋/dt = [Δ - (χ + iγ)/2] a₋ - i√γ u(t)
//! ```
//!
//! with γ the cavity linewidth, Δ the carrier detuning from the bare cavity
//! and u(t) a unit-energy Gaussian wavepacket of bandwidth Ω. In the
//! narrow-band limit (Ω ≪ γ) and at the symmetric operating point Δ = χ/2
//! the rotation angle approaches φ = 2 arctan(2χ/γ) independent of pulse
//! shape; [`optimize_rotation`] sweeps χ to hit a requested angle.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::sim::pulse::{gaussian_envelope, TimeGrid};

/// Default wavepacket bandwidth in units of γ (narrow-band operating point).
pub const DEFAULT_BANDWIDTH_FACTOR: f64 = 0.03;
/// Default integration step in units of the fastest rate in the model.
pub const DEFAULT_DT_FACTOR: f64 = 0.1;
/// Residual field amplitude allowed at the end of the window.
pub const RINGDOWN_TOL: f64 = 1e-4;
/// Settling tolerance used when reporting gate times.
pub const SETTLE_TOL: f64 = 1e-3;
/// The trailing window must extend this far (in units of 1/γ) past the pulse
/// center before a settling time may be read off.
pub const SETTLE_WINDOW_FACTOR: f64 = 300.0;
/// Default χ sweep: [0, 30γ] with 601 samples (0.05γ resolution).
pub const SWEEP_CHI_MAX_FACTOR: f64 = 30.0;
pub const SWEEP_SAMPLES: usize = 601;

/// Maximum recorded points per trajectory; integration steps in excess of
/// this are thinned by an integer stride.
const MAX_RECORD_POINTS: usize = 20_000;

#[derive(Debug, Clone)]
pub struct ZGateParams {
    /// Dispersive shift χ (angular).
    pub chi: f64,
    /// Cavity linewidth γ (angular rate), must be positive.
    pub gamma: f64,
    /// Carrier detuning Δ from the bare cavity (angular).
    pub delta: f64,
    /// Wavepacket bandwidth Ω (angular), must be positive.
    pub bandwidth: f64,
    /// Pulse-center arrival time.
    pub pulse_center: f64,
    /// Integration step in units of 1/(fastest rate); smaller is finer.
    pub dt_factor: f64,
}

impl ZGateParams {
    /// Operating-point constructor: Δ = χ/2 and Ω = 0.03 γ.
    pub fn at_operating_point(chi: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            chi,
            gamma,
            delta: chi / 2.0,
            bandwidth: DEFAULT_BANDWIDTH_FACTOR * gamma,
            pulse_center: 0.0,
            dt_factor: DEFAULT_DT_FACTOR,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "cavity linewidth must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.bandwidth > 0.0) || !self.bandwidth.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "wavepacket bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        if !self.chi.is_finite() || !self.delta.is_finite() || !self.pulse_center.is_finite() {
            return Err(SimError::InvalidParameter(
                "chi, delta and pulse_center must be finite".into(),
            ));
        }
        if !(self.dt_factor > 0.0) || self.dt_factor > 0.5 {
            return Err(SimError::InvalidParameter(format!(
                "dt_factor must lie in (0, 0.5], got {}",
                self.dt_factor
            )));
        }
        Ok(())
    }

    /// Integration window [t₀ - 6/Ω, t₀ + max(6/Ω, 300/γ)]: the leading edge
    /// clips < 1e-7 of the pulse energy, the trailing edge leaves room for
    /// ring-down and settling.
    pub fn window(&self) -> (f64, f64) {
        let lead = 6.0 / self.bandwidth;
        let trail = (6.0 / self.bandwidth).max(SETTLE_WINDOW_FACTOR / self.gamma);
        (self.pulse_center - lead, self.pulse_center + trail)
    }

    fn fastest_rate(&self) -> f64 {
        let lam_up = (self.delta + self.chi / 2.0).abs() + self.gamma / 2.0;
        let lam_dn = (self.delta - self.chi / 2.0).abs() + self.gamma / 2.0;
        self.gamma.max(self.bandwidth).max(lam_up).max(lam_dn)
    }
}

/// Recorded scattering solution. `coherence[k]` is ⟨σ⟩(t_k); the two field
/// amplitudes are conditioned on the upper/lower qubit state.
#[derive(Debug, Clone)]
pub struct CoherenceTrajectory {
    pub times: Vec<f64>,
    pub coherence: Vec<C64>,
    pub field_up: Vec<C64>,
    pub field_down: Vec<C64>,
    pub pulse_center: f64,
    pub gamma: f64,
}

impl CoherenceTrajectory {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.coherence.iter().map(|z| z.norm()).collect()
    }

    /// Accumulated rotation angle φ(t) ≥ 0 for the standard operating point:
    /// the unwrapped negative phase change of the coherence relative to its
    /// initial value (the coherence ratio approaches e^{-iφ}, so the Bloch
    /// vector rotates by +φ about z).
    pub fn rotation_angles(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.coherence.len());
        let mut acc = 0.0;
        let mut prev: Option<C64> = None;
        for z in &self.coherence {
            if z.norm() > 1e-300 {
                if let Some(p) = prev {
                    acc -= (z / p).arg();
                }
                prev = Some(*z);
            }
            out.push(acc);
        }
        out
    }

    pub fn final_rotation_angle(&self) -> f64 {
        *self.rotation_angles().last().expect("non-empty trajectory")
    }

    pub fn final_magnitude(&self) -> f64 {
        self.coherence.last().expect("non-empty trajectory").norm()
    }

    /// Final coherence re-expressed with the rotation angle as a positive
    /// phase on top of the initial coherence's phase — the convention
    /// [`gate_fidelity`] expects for its `coherence` argument.
    pub fn rotated_coherence_final(&self) -> C64 {
        let phase0 = self.coherence.first().map(|z| z.arg()).unwrap_or(0.0);
        C64::from_polar(self.final_magnitude(), self.final_rotation_angle() + phase0)
    }
}

/// Integrate the scattering equations of motion for one incident wavepacket.
///
/// `initial_coherence` is ⟨σ⟩ before the pulse; its magnitude may not exceed
/// 1/2 (the largest coherence a qubit state supports). The run is rejected
/// with `IncompleteScattering` if either field amplitude is still above
/// `RINGDOWN_TOL` at the end of the window.
pub fn evolve_effective_eoms(
    params: &ZGateParams,
    initial_coherence: C64,
) -> Result<CoherenceTrajectory> {
    params.validate()?;
    if initial_coherence.norm() > 0.5 + 1e-9 {
        return Err(SimError::InvalidState(format!(
            "initial coherence magnitude {} exceeds 1/2",
            initial_coherence.norm()
        )));
    }

    let (t_start, t_end) = params.window();
    let dt = params.dt_factor / params.fastest_rate();
    let grid = TimeGrid::from_step(t_start, t_end, dt)?;
    let stride = (grid.n_steps() / MAX_RECORD_POINTS).max(1);

    let pulse = gaussian_envelope(params.bandwidth, params.pulse_center)?;
    let sqrt_gamma = params.gamma.sqrt();
    let lam_up = C64::new(params.delta + params.chi / 2.0, -params.gamma / 2.0);
    let lam_dn = C64::new(params.delta - params.chi / 2.0, -params.gamma / 2.0);
    let minus_i = C64::new(0.0, -1.0);
    let drive_sigma = minus_i * params.chi * initial_coherence;

    // y = (coherence, field_up, field_down)
    let rhs = |t: f64, y: &[C64; 3]| -> [C64; 3] {
        let u = pulse.eval(t);
        [
            drive_sigma * y[1] * y[2].conj(),
            minus_i * lam_up * y[1] - sqrt_gamma * u,
            minus_i * lam_dn * y[2] - sqrt_gamma * u,
        ]
    };

    let h = grid.dt();
    let mut y = [initial_coherence, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let mut times = Vec::with_capacity(grid.n_steps() / stride + 2);
    let mut coherence = Vec::with_capacity(times.capacity());
    let mut field_up = Vec::with_capacity(times.capacity());
    let mut field_down = Vec::with_capacity(times.capacity());
    let mut record = |t: f64, y: &[C64; 3]| {
        times.push(t);
        coherence.push(y[0]);
        field_up.push(y[1]);
        field_down.push(y[2]);
    };
    record(grid.time(0), &y);

    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        let k1 = rhs(t, &y);
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1], y[2] + 0.5 * h * k1[2]];
        let k2 = rhs(t + 0.5 * h, &y2);
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1], y[2] + 0.5 * h * k2[2]];
        let k3 = rhs(t + 0.5 * h, &y3);
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2]];
        let k4 = rhs(t + h, &y4);
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (k + 1) % stride == 0 || k + 1 == grid.n_steps() {
            record(grid.time(k + 1), &y);
        }
    }

    let residual = y[1].norm().max(y[2].norm());
    if residual > RINGDOWN_TOL {
        return Err(SimError::IncompleteScattering(format!(
            "field amplitude {residual:.2e} at the end of the window (limit {RINGDOWN_TOL:.0e})"
        )));
    }

    Ok(CoherenceTrajectory {
        times,
        coherence,
        field_up,
        field_down,
        pulse_center: params.pulse_center,
        gamma: params.gamma,
    })
}

/// Narrow-band rotation angle at the operating point Δ = χ/2:
/// φ = 2 arctan(2χ/γ).
pub fn analytic_phase(chi: f64, gamma: f64) -> Result<f64> {
    if !(chi >= 0.0) || !chi.is_finite() {
        return Err(SimError::InvalidParameter(format!("chi must be >= 0, got {chi}")));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(SimError::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(2.0 * (2.0 * chi / gamma).atan())
}

/// Long-time coherence ratio of the scattering solution,
/// 1 - iχγ / [(Δ + (χ - iγ)/2)(Δ - (χ - iγ)/2)]; its magnitude never
/// exceeds 1, and at Δ = χ/2 it reduces to e^{-2i·arctan(2χ/γ)}.
pub fn long_time_coherence(chi: f64, gamma: f64, delta: f64) -> Result<C64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(SimError::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
    }
    if !chi.is_finite() || !delta.is_finite() {
        return Err(SimError::InvalidParameter("chi and delta must be finite".into()));
    }
    let half = C64::new(chi / 2.0, -gamma / 2.0);
    let denom = (delta + half) * (delta - half);
    let scale = gamma.max(chi.abs()).max(delta.abs());
    if denom.norm() < 1e-12 * scale * scale {
        return Err(SimError::DegenerateParameters(format!(
            "coherence denominator vanishes at chi={chi}, gamma={gamma}, delta={delta}"
        )));
    }
    Ok(C64::new(1.0, 0.0) - C64::new(0.0, 1.0) * chi * gamma / denom)
}

/// Fidelity of the scattered qubit state (a|0⟩ + b|1⟩ with the supplied final
/// coherence, phase convention as in
/// [`CoherenceTrajectory::rotated_coherence_final`]) against the ideal Z(φ)
/// rotation of the same input:
///
///   F = |a|⁴ + |b|⁴ + 2 Re[a* b e^{-iφ} coherence]
///
/// For the ideal coherence a b* e^{iφ} this gives exactly 1 regardless of a, b.
pub fn gate_fidelity(coherence: C64, a: C64, b: C64, target_phi: f64) -> Result<f64> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(SimError::InvalidState(format!(
            "qubit amplitudes have norm² {norm:.12}, expected 1"
        )));
    }
    if coherence.norm() > a.norm() * b.norm() + 1e-6 {
        return Err(SimError::InvalidState(format!(
            "coherence magnitude {:.6} exceeds |a||b| = {:.6}",
            coherence.norm(),
            a.norm() * b.norm()
        )));
    }
    if !target_phi.is_finite() {
        return Err(SimError::InvalidParameter("target phase must be finite".into()));
    }
    let cross = a.conj() * b * C64::from_polar(1.0, -target_phi) * coherence;
    let f = a.norm_sqr() * a.norm_sqr() + b.norm_sqr() * b.norm_sqr() + 2.0 * cross.re;
    Ok(f.clamp(0.0, 1.0))
}

/// First recorded time after which both the coherence magnitude and its
/// unwrapped phase vary by less than `tol` over the remaining window.
///
/// Requires the trajectory to extend at least 300/γ past the pulse center so
/// "the remaining window" is a meaningful surrogate for t → ∞. Returns the
/// absolute grid time (for a constant coherence this is the window start).
pub fn steady_state_time(traj: &CoherenceTrajectory, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(SimError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let t_end = *traj.times.last().ok_or_else(|| {
        SimError::InvalidParameter("empty trajectory".into())
    })?;
    if t_end - traj.pulse_center < SETTLE_WINDOW_FACTOR / traj.gamma - 1e-9 {
        return Err(SimError::InvalidParameter(format!(
            "trajectory must extend at least {SETTLE_WINDOW_FACTOR}/γ past the pulse center"
        )));
    }

    let mags = traj.magnitudes();
    let angles = traj.rotation_angles();
    let n = mags.len();
    let mut mag_lo = vec![0.0; n];
    let mut mag_hi = vec![0.0; n];
    let mut ang_lo = vec![0.0; n];
    let mut ang_hi = vec![0.0; n];
    mag_lo[n - 1] = mags[n - 1];
    mag_hi[n - 1] = mags[n - 1];
    ang_lo[n - 1] = angles[n - 1];
    ang_hi[n - 1] = angles[n - 1];
    for i in (0..n - 1).rev() {
        mag_lo[i] = mags[i].min(mag_lo[i + 1]);
        mag_hi[i] = mags[i].max(mag_hi[i + 1]);
        ang_lo[i] = angles[i].min(ang_lo[i + 1]);
        ang_hi[i] = angles[i].max(ang_hi[i + 1]);
    }
    for i in 0..n {
        if mag_hi[i] - mag_lo[i] < tol && ang_hi[i] - ang_lo[i] < tol {
            return Ok(traj.times[i]);
        }
    }
    Err(SimError::NoSteadyState(format!(
        "coherence still varying by more than {tol:.1e} at the end of the window"
    )))
}

/// χ sweep grid for [`optimize_rotation`].
#[derive(Debug, Clone)]
pub struct ChiSweep {
    pub chi_min: f64,
    pub chi_max: f64,
    pub samples: usize,
}

impl ChiSweep {
    /// The standard grid [0, 30γ] with 601 samples.
    pub fn standard(gamma: f64) -> Self {
        Self { chi_min: 0.0, chi_max: SWEEP_CHI_MAX_FACTOR * gamma, samples: SWEEP_SAMPLES }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![self.chi_min];
        }
        (0..self.samples)
            .map(|i| {
                self.chi_min
                    + (self.chi_max - self.chi_min) * i as f64 / (self.samples - 1) as f64
            })
            .collect()
    }
}

/// Fixed operating rules applied at every sweep point: Δ = χ/2 and
/// Ω = bandwidth_factor · γ.
#[derive(Debug, Clone)]
pub struct SweepRules {
    pub gamma: f64,
    pub bandwidth_factor: f64,
}

impl SweepRules {
    pub fn narrow_band(gamma: f64) -> Self {
        Self { gamma, bandwidth_factor: DEFAULT_BANDWIDTH_FACTOR }
    }

    fn params_for(&self, chi: f64) -> Result<ZGateParams> {
        let p = ZGateParams {
            chi,
            gamma: self.gamma,
            delta: chi / 2.0,
            bandwidth: self.bandwidth_factor * self.gamma,
            pulse_center: 0.0,
            dt_factor: DEFAULT_DT_FACTOR,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Report for one optimized Z gate.
#[derive(Debug, Clone)]
pub struct ZGateReport {
    /// Achieved rotation angle at the winning χ.
    pub phi_final: f64,
    /// Final coherence magnitude (0.5 means no decoherence for a balanced input).
    pub coherence_final: f64,
    /// State fidelity against the target rotation for a balanced input.
    pub fidelity: f64,
    /// Winning dispersive shift.
    pub chi_used: f64,
    /// Settling time of the winning trajectory, measured from the pulse center.
    pub settle_time: f64,
}

/// Sweep χ over `sweep` (with Δ = χ/2, Ω = rules.bandwidth_factor·γ fixed),
/// score each point by the balanced-input fidelity against Z(target_phi) and
/// return the best. Ties break toward smaller χ.
pub fn optimize_rotation(
    target_phi: f64,
    sweep: &ChiSweep,
    rules: &SweepRules,
) -> Result<ZGateReport> {
    if sweep.samples == 0 {
        return Err(SimError::InvalidParameter("empty χ sweep".into()));
    }
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&target_phi) {
        return Err(SimError::InvalidParameter(format!(
            "target phase must lie in [0, π], got {target_phi}"
        )));
    }
    if sweep.chi_min < 0.0 || !(sweep.chi_max >= sweep.chi_min) {
        return Err(SimError::InvalidParameter(format!(
            "χ sweep range [{}, {}] is invalid",
            sweep.chi_min, sweep.chi_max
        )));
    }

    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let sigma0 = C64::new(0.5, 0.0);
    let chis = sweep.values();
    let evals: Vec<Result<(f64, f64, f64)>> = chis
        .par_iter()
        .map(|&chi| {
            let params = rules.params_for(chi)?;
            let traj = evolve_effective_eoms(&params, sigma0)?;
            let fid = gate_fidelity(traj.rotated_coherence_final(), amp, amp, target_phi)?;
            Ok((traj.final_rotation_angle(), traj.final_magnitude(), fid))
        })
        .collect();

    let mut best: Option<(usize, f64, f64, f64)> = None;
    for (i, ev) in evals.into_iter().enumerate() {
        let (angle, mag, fid) = ev?;
        if best.map_or(true, |(_, _, _, bf)| fid > bf) {
            best = Some((i, angle, mag, fid));
        }
    }
    let (idx, phi_final, coherence_final, fidelity) = best.expect("non-empty sweep");

    let winner = rules.params_for(chis[idx])?;
    let traj = evolve_effective_eoms(&winner, sigma0)?;
    let settle_abs = steady_state_time(&traj, SETTLE_TOL)?;

    Ok(ZGateReport {
        phi_final,
        coherence_final,
        fidelity,
        chi_used: chis[idx],
        settle_time: settle_abs - winner.pulse_center,
    })
}

/// [`optimize_rotation`] for a list of target angles (one report per target).
pub fn fidelity_curve(
    targets: &[f64],
    sweep: &ChiSweep,
    rules: &SweepRules,
) -> Result<Vec<ZGateReport>> {
    targets.iter().map(|&phi| optimize_rotation(phi, sweep, rules)).collect()
}
