//! The bilinear normal-form operator `T^{ε;ε₁,ε₂}` and the correction `h^ε`.
//!
//! For `ξη(ξ+η) ≠ 0`,
//!
//! ```text
//! T^{ε;ε₁,ε₂}(u,v)^(k) = Σ_{ξ+η=k} σ(ξ,η) û(ξ) v̂(η)
//! σ(ξ,η) = -½ |ξ+η| ⟨ξ⟩^α ⟨η⟩^α / (⟨ξ+η⟩^{1+α} D(ξ,η))
//! D(ξ,η) = ε₁|ξ|⟨ξ⟩ + ε₂|η|⟨η⟩ - ε|ξ+η|⟨ξ+η⟩
//! ```
//!
//! If `u`, `v` are free waves, `(∂_t - iε₁L)u = (∂_t - iε₂L)v = 0`, then
//!
//! ```text
//! (∂_t - iεL) T^{ε;ε₁,ε₂}(u, v) = -(1/2i) 𝓝(u, v),
//! ```
//!
//! with `𝓝(u,v) = L⁻¹⟨∇⟩^{-α}∂²(⟨∇⟩^α u ⟨∇⟩^α v)` as in
//! [`crate::dynamics::nonlinearity_n`]. The minus sign comes from the
//! negative symbol of `∂²`; it is exactly the sign with which the quadratic
//! term enters the half-wave equations of the good Boussinesq equation.

mod kernel;

pub use kernel::NormalFormKernel;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{
    apply_multiplier, bracket, dispersion, half_wave, p_symbol, MultiplierId, Sign, SpectralField,
};

/// Signs `(ε; ε₁, ε₂)` of a normal-form operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignTriple {
    pub eps: Sign,
    pub eps1: Sign,
    pub eps2: Sign,
}

impl SignTriple {
    pub const fn new(eps: Sign, eps1: Sign, eps2: Sign) -> Self {
        Self { eps, eps1, eps2 }
    }

    /// All eight sign combinations.
    pub fn all() -> impl Iterator<Item = SignTriple> {
        Sign::BOTH.into_iter().flat_map(|e| {
            Sign::BOTH
                .into_iter()
                .flat_map(move |e1| Sign::BOTH.into_iter().map(move |e2| SignTriple::new(e, e1, e2)))
        })
    }
}

impl std::fmt::Display for SignTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({};{},{})", self.eps, self.eps1, self.eps2)
    }
}

/// Selects the exact symbol or one of its size models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolVariant {
    Exact,
    /// `⟨ξ⟩^α⟨η⟩^α / (⟨ξ+η⟩^α max(ξ², η²))`
    AsymMinusMinus,
    /// `1 / (⟨ξ+η⟩^α ⟨ξ⟩^{1-α} ⟨η⟩^{1-α})`
    AsymPlusPlus,
    /// `⟨ξ⟩^α / (⟨ξ+η⟩^{α+1} ⟨η⟩^{1-α})`
    AsymPlusMinus,
}

impl SymbolVariant {
    /// The `(ε₁, ε₂)` pair whose exact symbol the size model describes.
    pub fn signs(self) -> Option<(Sign, Sign)> {
        match self {
            SymbolVariant::Exact => None,
            SymbolVariant::AsymMinusMinus => Some((Sign::Minus, Sign::Minus)),
            SymbolVariant::AsymPlusPlus => Some((Sign::Plus, Sign::Plus)),
            SymbolVariant::AsymPlusMinus => Some((Sign::Plus, Sign::Minus)),
        }
    }
}

fn check_nonresonant(xi: i64, eta: i64) -> Result<()> {
    if xi == 0 || eta == 0 || xi + eta == 0 {
        return Err(Error::Domain(format!(
            "resonant frequencies (ξ, η) = ({xi}, {eta}): ξη(ξ+η) = 0"
        )));
    }
    Ok(())
}

/// `ε₁|ξ|⟨ξ⟩ + ε₂|η|⟨η⟩ - ε|ξ+η|⟨ξ+η⟩`.
pub fn resonance_denominator(xi: i64, eta: i64, signs: SignTriple) -> Result<f64> {
    check_nonresonant(xi, eta)?;
    let d = signs.eps1.value() * dispersion(xi) + signs.eps2.value() * dispersion(eta)
        - signs.eps.value() * dispersion(xi + eta);
    if d == 0.0 {
        return Err(Error::Domain(format!(
            "vanishing denominator at (ξ, η) = ({xi}, {eta}) for {signs}"
        )));
    }
    Ok(d)
}

/// Signed symbol `σ(ξ, η)` of `T^{ε;ε₁,ε₂}`.
pub fn t_symbol(xi: i64, eta: i64, signs: SignTriple, alpha: f64) -> Result<f64> {
    let d = resonance_denominator(xi, eta, signs)?;
    let k = xi + eta;
    Ok(-0.5 * (k.unsigned_abs() as f64) * bracket(xi).powf(alpha) * bracket(eta).powf(alpha)
        / (bracket(k).powf(1.0 + alpha) * d))
}

/// `|σ(ξ, η)|` for [`SymbolVariant::Exact`], otherwise the size model.
pub fn symbol_value(
    xi: i64,
    eta: i64,
    variant: SymbolVariant,
    signs: SignTriple,
    alpha: f64,
) -> Result<f64> {
    check_nonresonant(xi, eta)?;
    let (bx, be, bk) = (bracket(xi), bracket(eta), bracket(xi + eta));
    Ok(match variant {
        SymbolVariant::Exact => t_symbol(xi, eta, signs, alpha)?.abs(),
        SymbolVariant::AsymMinusMinus => {
            let m = (xi * xi).max(eta * eta) as f64;
            bx.powf(alpha) * be.powf(alpha) / (bk.powf(alpha) * m)
        }
        SymbolVariant::AsymPlusPlus => {
            1.0 / (bk.powf(alpha) * bx.powf(1.0 - alpha) * be.powf(1.0 - alpha))
        }
        SymbolVariant::AsymPlusMinus => {
            bx.powf(alpha) / (bk.powf(alpha + 1.0) * be.powf(1.0 - alpha))
        }
    })
}

/// Per-mode tables shared by the direct double sums.
pub(crate) struct ModeTables {
    pub trunc: i64,
    /// `⟨n⟩^α`
    pub pow_alpha: Vec<f64>,
    /// `μ_n`
    pub mu: Vec<f64>,
    /// `|n| / ⟨n⟩^{1+α}`
    pub out_weight: Vec<f64>,
}

impl ModeTables {
    pub fn new(trunc: usize, alpha: f64) -> Self {
        let n = trunc as i64;
        let modes = || -n..=n;
        Self {
            trunc: n,
            pow_alpha: modes().map(|k| bracket(k).powf(alpha)).collect(),
            mu: modes().map(dispersion).collect(),
            out_weight: modes()
                .map(|k| (k.unsigned_abs() as f64) / bracket(k).powf(1.0 + alpha))
                .collect(),
        }
    }

    #[inline]
    pub fn idx(&self, k: i64) -> usize {
        (k + self.trunc) as usize
    }

    /// Signed symbol from the tables; callers guarantee `ξη(ξ+η) ≠ 0`.
    #[inline]
    pub fn symbol(&self, xi: i64, eta: i64, s: (f64, f64, f64)) -> f64 {
        let (i, j, k) = (self.idx(xi), self.idx(eta), self.idx(xi + eta));
        let d = s.1 * self.mu[i] + s.2 * self.mu[j] - s.0 * self.mu[k];
        -0.5 * self.out_weight[k] * self.pow_alpha[i] * self.pow_alpha[j] / d
    }

    /// Admissible `η` for a given `ξ`: `|η| ≤ N`, `|ξ + η| ≤ N`.
    #[inline]
    pub fn eta_range(&self, xi: i64) -> std::ops::RangeInclusive<i64> {
        (-self.trunc).max(-self.trunc - xi)..=self.trunc.min(self.trunc - xi)
    }
}

fn signs_f64(s: SignTriple) -> (f64, f64, f64) {
    (s.eps.value(), s.eps1.value(), s.eps2.value())
}

/// `T^{ε;ε₁,ε₂}(u, v)` by direct summation over all admissible pairs.
///
/// Pairs whose output frequency leaves `[-N, N]` are dropped.
pub fn apply_t(
    u: &SpectralField,
    v: &SpectralField,
    signs: SignTriple,
    alpha: f64,
) -> Result<SpectralField> {
    u.check_trunc(v)?;
    let tables = ModeTables::new(u.trunc(), alpha);
    Ok(apply_t_with(&tables, u, v, signs))
}

pub(crate) fn apply_t_with(
    tables: &ModeTables,
    u: &SpectralField,
    v: &SpectralField,
    signs: SignTriple,
) -> SpectralField {
    let n = tables.trunc;
    let s = signs_f64(signs);
    let (uc, vc) = (u.coeffs(), v.coeffs());
    let mut out = vec![Complex64::new(0.0, 0.0); uc.len()];
    for xi in (-n..=n).filter(|&x| x != 0) {
        let a = uc[tables.idx(xi)];
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for eta in tables.eta_range(xi) {
            if eta == 0 || eta == -xi {
                continue;
            }
            let w = tables.symbol(xi, eta, s);
            out[tables.idx(xi + eta)] += a * vc[tables.idx(eta)] * w;
        }
    }
    SpectralField::from_raw(u.trunc(), out)
}

/// Free wave `𝓛(t) = ½ e^{itL} f + (1/2i) e^{itL} L⁻¹ g` and its conjugate
/// partner `𝓛̄(t)` (the field of the complex-conjugate function).
pub fn free_parts(
    f: &SpectralField,
    g: &SpectralField,
    t: f64,
) -> Result<(SpectralField, SpectralField)> {
    f.check_trunc(g)?;
    if !f.has_zero_mean() || !g.has_zero_mean() {
        return Err(Error::Domain(
            "normal form needs mean-zero reduced data (f, g)".into(),
        ));
    }
    let linv_g = apply_multiplier(g, MultiplierId::Linv)?;
    let mut start = f.scale_real(0.5);
    start.axpy(Complex64::new(0.0, -0.5), &linv_g)?;
    let l = half_wave(&start, t, Sign::Plus);
    let lbar = l.conj_reflect();
    Ok((l, lbar))
}

fn gauge(t: f64, params: &ModelParams, sign: Sign) -> MultiplierId {
    MultiplierId::Gauge {
        t,
        a0: params.a0,
        a1: params.a1,
        sign,
    }
}

/// The three `(weight, first argument, second argument, ε₁, ε₂)` terms of
/// `h^ε = T^{ε;+,+}(𝓛,𝓛) + 2T^{ε;+,-}(𝓛,𝓛̄) + T^{ε;-,-}(𝓛̄,𝓛̄)`.
fn h_terms<'a>(
    l: &'a SpectralField,
    lbar: &'a SpectralField,
) -> [(f64, &'a SpectralField, &'a SpectralField, Sign, Sign); 3] {
    [
        (1.0, l, l, Sign::Plus, Sign::Plus),
        (2.0, l, lbar, Sign::Plus, Sign::Minus),
        (1.0, lbar, lbar, Sign::Minus, Sign::Minus),
    ]
}

/// Normal-form correction
/// `h^ε = T^{ε;+,+}(𝓛,𝓛) + 2T^{ε;+,-}(𝓛,𝓛̄) + T^{ε;-,-}(𝓛̄,𝓛̄)`.
///
/// With `gauged`, every argument is pre-multiplied by `e^{(A₀t+A₁t²/2)𝒫}` and
/// the result post-multiplied by the inverse gauge.
pub fn assemble_h(
    f: &SpectralField,
    g: &SpectralField,
    t: f64,
    eps: Sign,
    params: &ModelParams,
    gauged: bool,
) -> Result<SpectralField> {
    let (mut l, mut lbar) = free_parts(f, g, t)?;
    if gauged {
        l = apply_multiplier(&l, gauge(t, params, Sign::Plus))?;
        lbar = apply_multiplier(&lbar, gauge(t, params, Sign::Plus))?;
    }
    let tables = ModeTables::new(f.trunc(), params.alpha);
    let mut h = SpectralField::zeros(f.trunc());
    for (w, a, b, e1, e2) in h_terms(&l, &lbar) {
        let term = apply_t_with(&tables, a, b, SignTriple::new(eps, e1, e2));
        h.axpy(Complex64::new(w, 0.0), &term)?;
    }
    if gauged {
        h = apply_multiplier(&h, gauge(t, params, Sign::Minus))?;
    }
    Ok(h)
}

/// Terms of `(∂_t - iεL) h^ε` produced by the time derivative of the gauge
/// factors in the gauged [`assemble_h`]:
///
/// ```text
/// Err = (A₀ + A₁t) e^{-g𝒫} Σ w [ -𝒫 T(a, b) + T(𝒫a, b) + T(a, 𝒫b) ]
/// ```
///
/// with `a, b` the gauged arguments. With it,
/// `(∂_t - iεL) h^ε = -(1/2i) Ñ(𝓛 + 𝓛̄, 𝓛 + 𝓛̄) + Err` holds exactly.
pub fn err_term(
    f: &SpectralField,
    g: &SpectralField,
    t: f64,
    eps: Sign,
    params: &ModelParams,
) -> Result<SpectralField> {
    let (l, lbar) = free_parts(f, g, t)?;
    let rate = params.drift_rate(t);
    if rate == 0.0 {
        return Ok(SpectralField::zeros(f.trunc()));
    }
    let l = apply_multiplier(&l, gauge(t, params, Sign::Plus))?;
    let lbar = apply_multiplier(&lbar, gauge(t, params, Sign::Plus))?;
    let tables = ModeTables::new(f.trunc(), params.alpha);
    let mut acc = SpectralField::zeros(f.trunc());
    for (w, a, b, e1, e2) in h_terms(&l, &lbar) {
        let signs = SignTriple::new(eps, e1, e2);
        let outer = apply_multiplier(&apply_t_with(&tables, a, b, signs), MultiplierId::P)?;
        let pa = apply_multiplier(a, MultiplierId::P)?;
        let pb = apply_multiplier(b, MultiplierId::P)?;
        acc.axpy(Complex64::new(-w, 0.0), &outer)?;
        acc.axpy(Complex64::new(w, 0.0), &apply_t_with(&tables, &pa, b, signs))?;
        acc.axpy(Complex64::new(w, 0.0), &apply_t_with(&tables, a, &pb, signs))?;
    }
    let acc = apply_multiplier(&acc, gauge(t, params, Sign::Minus))?;
    Ok(acc.scale_real(rate))
}

/// Symbol of `𝒫` used by [`NormalFormKernel`].
#[inline]
pub(crate) fn p_of(k: i64) -> f64 {
    p_symbol(k)
}
