use crate::error::{invalid, Result};

/// Every scalar of the model in one place.
///
/// `a0`, `a1` are the drift coefficients of the mean: the reduced equation
/// carries the linear term `(a0 + a1 t) 𝒫 w`, so for data `(u0, u1)` they
/// equal `2·mean(u0)` and `2·mean(u1)` (see
/// [`crate::dynamics::reduce_initial_data`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Data roughness: `u0 ∈ H^{-alpha}`.
    pub alpha: f64,
    /// Remainder regularity in the `w` variable.
    pub gamma: f64,
    /// Remainder regularity in the `u` variable, `beta = gamma - alpha`.
    pub beta: f64,
    /// Modulation slack.
    pub delta: f64,
    pub a0: f64,
    pub a1: f64,
    /// Fourier truncation `N`.
    pub trunc: usize,
    pub dt: f64,
    pub horizon: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 0.3,
            gamma: 0.35,
            beta: 0.05,
            delta: 0.01,
            a0: 0.0,
            a1: 0.0,
            trunc: 64,
            dt: 1e-4,
            horizon: 0.25,
        }
    }
}

impl ModelParams {
    /// Checks the documented ranges.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.alpha) {
            return Err(invalid("alpha", format!("must lie in [0, 1/2), got {}", self.alpha)));
        }
        if !(self.delta > 0.0 && self.delta <= 0.1) {
            return Err(invalid("delta", format!("must lie in (0, 0.1], got {}", self.delta)));
        }
        if self.trunc < 4 {
            return Err(invalid("trunc", format!("must be at least 4, got {}", self.trunc)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(invalid("horizon", format!("must be positive, got {}", self.horizon)));
        }
        if !self.gamma.is_finite() || !self.beta.is_finite() {
            return Err(invalid("gamma", "gamma and beta must be finite"));
        }
        if ((self.gamma - self.alpha) - self.beta).abs() > 1e-12 {
            return Err(invalid(
                "beta",
                format!(
                    "must equal gamma - alpha = {}, got {}",
                    self.gamma - self.alpha,
                    self.beta
                ),
            ));
        }
        if !self.a0.is_finite() || !self.a1.is_finite() {
            return Err(invalid("a0", "drift coefficients must be finite"));
        }
        Ok(())
    }

    /// Sets `gamma` and keeps `beta = gamma - alpha`.
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self.beta = gamma - self.alpha;
        self
    }

    /// Sets `beta` and keeps `gamma = beta + alpha`.
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self.gamma = beta + self.alpha;
        self
    }

    /// Sets `alpha`, keeping `beta` and moving `gamma`.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.gamma = self.beta + alpha;
        self
    }

    /// Drift rate `a0 + a1 t`.
    pub fn drift_rate(&self, t: f64) -> f64 {
        self.a0 + self.a1 * t
    }

    pub fn is_gauge_trivial(&self) -> bool {
        self.a0 == 0.0 && self.a1 == 0.0
    }
}
