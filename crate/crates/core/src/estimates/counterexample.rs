use crate::error::{invalid, Result};
use crate::fit::{fit_loglog, LogLogFit};
use crate::spectral::bracket;

/// `⟨N+1⟩ - ⟨N⟩` without cancellation.
fn bracket_gap(n: f64) -> f64 {
    (2.0 * n + 1.0) / (bracket_f(n + 1.0) + bracket_f(n))
}

fn bracket_f(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "counterexample needs N >= 1"));
    }
    Ok(())
}

/// `C(N) = (N+1)⟨N⟩^{2α} / (⟨N+1⟩^{1-γ} (N[⟨N+1⟩ - ⟨N⟩] + ⟨N⟩ - √2))`.
///
/// The denominator is positive for `N ≥ 1`: `⟨N+1⟩ > ⟨N⟩` and
/// `⟨N⟩ ≥ ⟨1⟩ = √2`.
pub fn counterexample_constant(n: u64, alpha: f64, gamma: f64) -> Result<f64> {
    check_n(n)?;
    let x = n as f64;
    let d = x * bracket_gap(x) + bracket_f(x) - std::f64::consts::SQRT_2;
    Ok((x + 1.0) * bracket_f(x).powf(2.0 * alpha) / (bracket_f(x + 1.0).powf(1.0 - gamma) * d))
}

/// `⟨N+1⟩^γ |𝓝(T^{+;+,-}(e^{i(N+1)x}, e^{-iNx}), e^{iNx})|` at frequency
/// `N+1`, evaluated directly:
///
/// ```text
/// (N+1)⟨N⟩^{2α} / (2√2 ⟨N+1⟩^{1-γ} (N[⟨N+1⟩ - ⟨N⟩] + ⟨N+1⟩ - √2)).
/// ```
pub fn counterexample_exact(n: u64, alpha: f64, gamma: f64) -> Result<f64> {
    check_n(n)?;
    let x = n as f64;
    let d = x * bracket_gap(x) + bracket_f(x + 1.0) - std::f64::consts::SQRT_2;
    Ok((x + 1.0) * bracket_f(x).powf(2.0 * alpha)
        / (2.0 * std::f64::consts::SQRT_2 * bracket_f(x + 1.0).powf(1.0 - gamma) * d))
}

/// `C_α = -½⟨N+1⟩^α⟨N⟩^α`, the numerator of the normal-form symbol on the
/// counterexample pair.
pub fn counterexample_c_alpha(n: u64, alpha: f64) -> f64 {
    let n = n as i64;
    -0.5 * bracket(n + 1).powf(alpha) * bracket(n).powf(alpha)
}

/// `N = 2⁶, ..., 2²⁰`.
pub fn default_counterexample_ns() -> Vec<u64> {
    (6..=20).map(|k| 1u64 << k).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub alpha: f64,
    pub gamma: f64,
    pub ns: Vec<u64>,
    pub values: Vec<f64>,
    pub exact_values: Vec<f64>,
    pub fit: LogLogFit,
    pub exact_fit: LogLogFit,
    /// `2α + γ - 1`
    pub theory: f64,
}

/// Evaluates both forms of the constant on `ns` and fits exponents.
pub fn counterexample_scan(alpha: f64, gamma: f64, ns: &[u64]) -> Result<CounterexampleReport> {
    if !alpha.is_finite() || !gamma.is_finite() {
        return Err(invalid("alpha", "alpha and gamma must be finite"));
    }
    let values = ns
        .iter()
        .map(|&n| counterexample_constant(n, alpha, gamma))
        .collect::<Result<Vec<_>>>()?;
    let exact_values = ns
        .iter()
        .map(|&n| counterexample_exact(n, alpha, gamma))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    Ok(CounterexampleReport {
        alpha,
        gamma,
        ns: ns.to_vec(),
        fit: fit_loglog(&xs, &values)?,
        exact_fit: fit_loglog(&xs, &exact_values)?,
        values,
        exact_values,
        theory: 2.0 * alpha + gamma - 1.0,
    })
}
