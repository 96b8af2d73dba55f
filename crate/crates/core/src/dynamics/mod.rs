//! Reduction of the data, the quadratic nonlinearity and the two solvers.
//!
//! With `m(t) = mean(u₀) + t·mean(u₁)`, `v = u - m` and `w = ⟨∇⟩^{-α} v`,
//! the equation becomes
//!
//! ```text
//! w_tt + L² w + 2m(t) ∂² w + ⟨∇⟩^{-α} ∂² (⟨∇⟩^α w)² = 0,     L = (∂⁴ - ∂²)^{1/2}.
//! ```
//!
//! Writing `w = w⁺ + w⁻` with `w_t = iL(w⁺ - w⁻)` gives the half-wave system
//!
//! ```text
//! (∂_t ∓ iL) w^± = ∓(1/2i) [𝓝(w, w) + 2m(t) 𝒫 w].
//! ```
//!
//! The drift `2m(t)𝒫w = (A₀ + A₁t)𝒫w` couples the two half waves. The gauge
//! transform removes the diagonal model `(∂_t ∓ iL) w^± = (A₀ + A₁t)𝒫w^± ∓ ...`
//! instead, see [`MeanDrift`].

mod decomposed;
mod diagnostics;
mod direct;
mod stepper;
mod trajectory;

pub use decomposed::{integrate_decomposed, integrate_decomposed_with, DecompState, DecomposedRun};
pub use diagnostics::{
    free_part, remainder_z, scan_data, smoothing_cell, smoothing_scan, smoothing_scan_with,
    RemainderTable, SmoothingCell, SmoothingReport, SmoothingRow, GROWTH_THRESHOLD, SCAN_CFL,
};
pub use direct::{integrate_direct, integrate_direct_with};
pub use trajectory::{SolverOptions, Trajectory};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{
    apply_multiplier, bracket, MultiplierId, ProductKernel, Sign, SpectralField,
};

/// How the mean-driven linear term enters the direct solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanDrift {
    /// `(A₀ + A₁t)𝒫 w^±` in each half-wave equation separately. This is the
    /// system the gauge transform conjugates away exactly, so the direct and
    /// decomposed solvers agree for any mean.
    #[default]
    Reduced,
    /// `∓(1/2i)(A₀ + A₁t)𝒫(w⁺ + w⁻)`, the term produced by the equation
    /// itself.
    Coupled,
}

/// Mean-free data in the `w` variable together with the means of `(u₀, u₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedData {
    /// `⟨∇⟩^{-α}(u₀ - mean(u₀))`
    pub f: SpectralField,
    /// `⟨∇⟩^{-α}(u₁ - mean(u₁))`
    pub g: SpectralField,
    pub mean0: f64,
    pub mean1: f64,
    pub alpha: f64,
}

impl ReducedData {
    /// Drift constant `A₀ = 2·mean(u₀)`.
    pub fn a0(&self) -> f64 {
        2.0 * self.mean0
    }

    /// Drift slope `A₁ = 2·mean(u₁)`.
    pub fn a1(&self) -> f64 {
        2.0 * self.mean1
    }

    /// Mean of the solution at time `t`.
    pub fn mean_at(&self, t: f64) -> f64 {
        self.mean0 + t * self.mean1
    }

    /// `params` with `a0`, `a1` replaced by the values of this data.
    pub fn drift_params(&self, params: &ModelParams) -> ModelParams {
        ModelParams {
            a0: self.a0(),
            a1: self.a1(),
            ..*params
        }
    }

    /// `u = mean + ⟨∇⟩^α w` for a field `w` in the reduced variable.
    pub fn restore(&self, w: &SpectralField, t: f64) -> Result<SpectralField> {
        let mut u = apply_multiplier(w, MultiplierId::BracketPow(self.alpha))?;
        u.set(0, Complex64::new(self.mean_at(t), 0.0))?;
        Ok(u)
    }
}

/// Splits off the means and conjugates by `⟨∇⟩^{-α}`.
pub fn reduce_initial_data(
    u0: &SpectralField,
    u1: &SpectralField,
    alpha: f64,
) -> Result<ReducedData> {
    u0.check_trunc(u1)?;
    if !u0.is_real() || !u1.is_real() {
        return Err(Error::Domain("initial data must be real".into()));
    }
    let down = MultiplierId::BracketPow(-alpha);
    Ok(ReducedData {
        f: apply_multiplier(&u0.without_mean(), down)?,
        g: apply_multiplier(&u1.without_mean(), down)?,
        mean0: u0.mean().re,
        mean1: u1.mean().re,
        alpha,
    })
}

/// Reusable evaluator of `𝓝(u, v) = L^{-1}⟨∇⟩^{-α}∂²(⟨∇⟩^α u · ⟨∇⟩^α v)`.
#[derive(Debug, Clone)]
pub(crate) struct Nonlinearity {
    product: ProductKernel,
    up: Vec<f64>,
    down: Vec<f64>,
}

impl Nonlinearity {
    pub fn new(trunc: usize, alpha: f64) -> Self {
        let n = trunc as i64;
        Self {
            product: ProductKernel::new(trunc),
            up: (-n..=n).map(|k| bracket(k).powf(alpha)).collect(),
            down: (-n..=n)
                .map(|k| -(k.unsigned_abs() as f64) / bracket(k).powf(1.0 + alpha))
                .collect(),
        }
    }

    fn lift(&self, u: &SpectralField) -> SpectralField {
        let n = self.product.trunc() as i64;
        u.map_modes(true, |k, c| c * self.up[(k + n) as usize])
    }

    pub fn apply(&self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        u.check_trunc(v)?;
        let n = self.product.trunc() as i64;
        let lu = self.lift(u);
        let prod = if std::ptr::eq(u, v) {
            self.product.product(&lu, &lu)?
        } else {
            self.product.product(&lu, &self.lift(v))?
        };
        Ok(prod.map_modes(true, |k, c| c * self.down[(k + n) as usize]))
    }
}

/// `𝓝(u, v)`: symbol `-|n| / ⟨n⟩^{1+α}` applied to the dealiased product
/// of `⟨∇⟩^α u` and `⟨∇⟩^α v`.
pub fn nonlinearity_n(u: &SpectralField, v: &SpectralField, alpha: f64) -> Result<SpectralField> {
    u.check_trunc(v)?;
    Nonlinearity::new(u.trunc(), alpha).apply(u, v)
}

fn gauge(t: f64, params: &ModelParams, sign: Sign) -> MultiplierId {
    MultiplierId::Gauge {
        t,
        a0: params.a0,
        a1: params.a1,
        sign,
    }
}

/// `Ñ(u, v) = e^{-g𝒫} 𝓝(e^{g𝒫} u, e^{g𝒫} v)` with `g = A₀t + A₁t²/2`.
pub fn gauged_nonlinearity(
    u: &SpectralField,
    v: &SpectralField,
    t: f64,
    params: &ModelParams,
) -> Result<SpectralField> {
    let up = gauge(t, params, Sign::Plus);
    let n = nonlinearity_n(
        &apply_multiplier(u, up)?,
        &apply_multiplier(v, up)?,
        params.alpha,
    )?;
    apply_multiplier(&n, gauge(t, params, Sign::Minus))
}

/// Rejects data whose truncation differs from `params.trunc`.
fn check_data(u0: &SpectralField, u1: &SpectralField, params: &ModelParams) -> Result<()> {
    params.validate()?;
    u0.check_trunc(u1)?;
    if u0.trunc() != params.trunc {
        return Err(Error::TruncationMismatch {
            left: params.trunc,
            right: u0.trunc(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
