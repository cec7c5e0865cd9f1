use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};

/// A uniform time grid `t_start + k (t_end - t_start)/n_steps`, k = 0..=n_steps.
/// Grid points double as both integration steps and recording times.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    /// Grid with an explicit number of steps (so `n_steps + 1` points).
    pub fn with_steps(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "time grid needs t_end > t_start, got [{t_start}, {t_end}]"
            )));
        }
        if n_steps == 0 {
            return Err(SimError::InvalidParameter("time grid needs at least one step".into()));
        }
        Ok(Self { t_start, t_end, n_steps })
    }

    /// Grid with a target step; the actual step is shrunk so the span is an
    /// integer number of steps.
    pub fn from_step(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(SimError::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        let span = t_end - t_start;
        if !(span > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "time grid needs t_end > t_start, got [{t_start}, {t_end}]"
            )));
        }
        let n = (span / dt - 1e-9).ceil().max(1.0) as usize;
        Self::with_steps(t_start, t_end, n)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + (self.t_end - self.t_start) * k as f64 / self.n_steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| self.time(k)).collect()
    }

    /// A grid over the same span with twice as many steps, for convergence checks.
    pub fn halved(&self) -> TimeGrid {
        TimeGrid { t_start: self.t_start, t_end: self.t_end, n_steps: self.n_steps * 2 }
    }
}

/// A pulse envelope: an evaluation rule plus a finite support window outside
/// of which the amplitude is exactly zero.
#[derive(Clone)]
pub struct PulseEnvelope {
    amp: Arc<dyn Fn(f64) -> C64 + Send + Sync>,
    support: (f64, f64),
}

impl std::fmt::Debug for PulseEnvelope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PulseEnvelope").field("support", &self.support).finish()
    }
}

impl PulseEnvelope {
    pub fn new(
        amp: impl Fn(f64) -> C64 + Send + Sync + 'static,
        support: (f64, f64),
    ) -> Result<Self> {
        if !(support.1 > support.0) {
            return Err(SimError::InvalidParameter(
                "pulse support window must have positive length".into(),
            ));
        }
        Ok(Self { amp: Arc::new(amp), support })
    }

    pub fn eval(&self, t: f64) -> C64 {
        if t < self.support.0 || t > self.support.1 {
            C64::new(0.0, 0.0)
        } else {
            (self.amp)(t)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }
}

/// Unit-energy Gaussian wavepacket
///   u(t) = (bandwidth^2 / 2π)^{1/4} exp[-(bandwidth^2/4)(t - center)^2],
/// normalized so ∫|u|² dt = 1. The support window is center ± 8/bandwidth,
/// wide enough that the clipped tails carry < 1e-15 of the pulse energy.
pub fn gaussian_envelope(bandwidth: f64, center: f64) -> Result<PulseEnvelope> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "gaussian envelope bandwidth must be positive, got {bandwidth}"
        )));
    }
    let norm = (bandwidth * bandwidth / (2.0 * std::f64::consts::PI)).powf(0.25);
    let width = 8.0 / bandwidth;
    PulseEnvelope::new(
        move |t| {
            let s = t - center;
            C64::new(norm * (-(bandwidth * bandwidth) * s * s / 4.0).exp(), 0.0)
        },
        (center - width, center + width),
    )
}

/// Constant-amplitude pulse on [start, end].
pub fn square_envelope(amplitude: C64, start: f64, end: f64) -> Result<PulseEnvelope> {
    PulseEnvelope::new(move |_| amplitude, (start, end))
}
