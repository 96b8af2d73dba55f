use num_complex::Complex64;

use super::MeanDrift;
use crate::error::{Error, Result};
use crate::spectral::{sobolev_norm, SpectralField};

/// Output and model switches shared by the integrators.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Number of equal output intervals on `[0, T]`. The step count is
    /// rounded up to a multiple of it so that every output time is hit
    /// exactly.
    pub outputs: usize,
    /// Sobolev orders recorded at every output time.
    pub norm_orders: Vec<f64>,
    pub drift: MeanDrift,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            outputs: 50,
            norm_orders: vec![0.0],
            drift: MeanDrift::Reduced,
        }
    }
}

impl SolverOptions {
    /// Step count and effective step for horizon `horizon` and target `dt`.
    pub(crate) fn grid(&self, horizon: f64, dt: f64) -> Result<(usize, f64)> {
        if self.outputs == 0 {
            return Err(crate::error::invalid("outputs", "need at least one output interval"));
        }
        let raw = (horizon / dt).ceil().max(1.0) as usize;
        let steps = raw.div_ceil(self.outputs) * self.outputs;
        Ok((steps, horizon / steps as f64))
    }
}

/// Time series of fields with their Sobolev norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub zero_mode: Vec<Complex64>,
    pub norm_orders: Vec<f64>,
    /// `norms[i][j] = ‖states[i]‖_{H^{norm_orders[j]}}`
    pub norms: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(norm_orders: Vec<f64>) -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            zero_mode: Vec::new(),
            norm_orders,
            norms: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, state: SpectralField) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::Domain(format!(
                    "trajectory times must increase: {t} after {last}"
                )));
            }
        }
        if let Some(first) = self.states.first() {
            first.check_trunc(&state)?;
        }
        self.norms
            .push(self.norm_orders.iter().map(|&s| sobolev_norm(&state, s)).collect());
        self.zero_mode.push(state.mean());
        self.times.push(t);
        self.states.push(state);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &SpectralField)> {
        Some((*self.times.last()?, self.states.last()?))
    }

    /// State recorded at time `t` (matched to `1e-12` relative).
    pub fn state_at(&self, t: f64) -> Option<&SpectralField> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .map(|i| &self.states[i])
    }

    /// Column of recorded norms for order `s`, if it was requested.
    pub fn norm_series(&self, s: f64) -> Option<Vec<f64>> {
        let j = self.norm_orders.iter().position(|&o| o == s)?;
        Some(self.norms.iter().map(|row| row[j]).collect())
    }
}
