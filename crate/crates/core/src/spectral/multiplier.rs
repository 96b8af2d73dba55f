use num_complex::Complex64;

use super::field::SpectralField;
use crate::error::{Error, Result};

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    #[inline]
    pub fn int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_int(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Japanese bracket `⟨n⟩ = (1 + n²)^{1/2}`.
#[inline]
pub fn bracket(n: i64) -> f64 {
    let x = n as f64;
    (1.0 + x * x).sqrt()
}

/// Dispersion relation `μ_n = |n| ⟨n⟩`, the symbol of `L = (∂⁴ - ∂²)^{1/2}`.
#[inline]
pub fn dispersion(n: i64) -> f64 {
    (n.unsigned_abs() as f64) * bracket(n)
}

/// Symbol of `𝒫 = L^{-1} ∂²`: `-|n| / ⟨n⟩` (zero at `n = 0`).
#[inline]
pub fn p_symbol(n: i64) -> f64 {
    -(n.unsigned_abs() as f64) / bracket(n)
}

/// Exponent `A₀ t + A₁ t² / 2` of the gauge transform.
#[inline]
pub fn gauge_phase(t: f64, a0: f64, a1: f64) -> f64 {
    a0 * t + 0.5 * a1 * t * t
}

/// Fourier multipliers used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierId {
    /// `L`, symbol `|n|⟨n⟩`.
    L,
    /// `L^{-1}` on mean-zero fields.
    Linv,
    /// `𝒫`, symbol `-|n|/⟨n⟩`.
    P,
    /// `⟨∇⟩^s`, symbol `⟨n⟩^s`.
    BracketPow(f64),
    /// `|∇|` on mean-zero fields.
    AbsDeriv,
    /// `e^{±(A₀t + A₁t²/2) 𝒫}`: symbol `exp(∓(A₀t + A₁t²/2)|n|/⟨n⟩)`.
    Gauge { t: f64, a0: f64, a1: f64, sign: Sign },
}

impl MultiplierId {
    /// Symbol value at mode `n`. For `Linv` the value at `n = 0` is 0.
    pub fn symbol(&self, n: i64) -> f64 {
        match *self {
            MultiplierId::L => dispersion(n),
            MultiplierId::Linv => {
                if n == 0 {
                    0.0
                } else {
                    1.0 / dispersion(n)
                }
            }
            MultiplierId::P => p_symbol(n),
            MultiplierId::BracketPow(s) => bracket(n).powf(s),
            MultiplierId::AbsDeriv => n.unsigned_abs() as f64,
            MultiplierId::Gauge { t, a0, a1, sign } => {
                (sign.value() * gauge_phase(t, a0, a1) * p_symbol(n)).exp()
            }
        }
    }

    fn requires_zero_mean(&self) -> bool {
        matches!(self, MultiplierId::Linv | MultiplierId::AbsDeriv)
    }
}

/// Coefficient-wise product with the multiplier's symbol.
pub fn apply_multiplier(u: &SpectralField, m: MultiplierId) -> Result<SpectralField> {
    if m.requires_zero_mean() && !u.has_zero_mean() {
        return Err(Error::Domain(format!(
            "{m:?} needs a mean-zero field, got c_0 = {}",
            u.mean()
        )));
    }
    Ok(u.map_modes(true, |n, c| c * m.symbol(n)))
}

/// `‖u‖_{H^s} = (Σ ⟨n⟩^{2s} |c_n|²)^{1/2}`.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> f64 {
    u.modes()
        .map(|(n, c)| (1.0 + (n * n) as f64).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Unit-modulus phase `e^{iθ}`.
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn l_on_first_mode() {
        let u = SpectralField::mode(4, 1, c(1.0, 0.0)).unwrap();
        let v = apply_multiplier(&u, MultiplierId::L).unwrap();
        assert_relative_eq!(v.get(1).re, 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn p_kills_constants() {
        let u = SpectralField::constant(4, 1.0);
        let v = apply_multiplier(&u, MultiplierId::P).unwrap();
        assert_eq!(v.get(0), c(0.0, 0.0));
    }

    #[test]
    fn gauge_on_first_mode() {
        let u = SpectralField::mode(4, 1, c(1.0, 0.0)).unwrap();
        let m = MultiplierId::Gauge {
            t: 1.0,
            a0: 1.0,
            a1: 0.0,
            sign: Sign::Plus,
        };
        let v = apply_multiplier(&u, m).unwrap();
        // exp(-1/sqrt 2)
        assert_relative_eq!(v.get(1).re, 0.493_068_691_395_234_5, max_relative = 1e-12);
    }

    #[test]
    fn inverse_operators_reject_nonzero_mean() {
        let u = SpectralField::constant(4, 1.0);
        assert!(matches!(
            apply_multiplier(&u, MultiplierId::Linv),
            Err(Error::Domain(_))
        ));
        assert!(apply_multiplier(&u, MultiplierId::AbsDeriv).is_err());
        assert!(apply_multiplier(&u, MultiplierId::L).is_ok());
    }

    #[test]
    fn sobolev_norm_examples() {
        let u = SpectralField::mode(4, 1, c(1.0, 0.0)).unwrap();
        assert_relative_eq!(sobolev_norm(&u, 1.0), 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(sobolev_norm(&SpectralField::zeros(4), 0.3), 0.0);
        let v = SpectralField::cosine(4, 1, 2.0).unwrap();
        // (2 · (1/2) · 1)^{1/2}
        assert_relative_eq!(sobolev_norm(&v, -1.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn real_symbols_keep_real_flag() {
        let u = SpectralField::cosine(6, 3, 1.0).unwrap();
        for m in [
            MultiplierId::L,
            MultiplierId::P,
            MultiplierId::BracketPow(-0.3),
            MultiplierId::Gauge {
                t: 0.7,
                a0: 0.4,
                a1: -1.0,
                sign: Sign::Minus,
            },
        ] {
            let v = apply_multiplier(&u, m).unwrap();
            assert!(v.is_real());
            assert_eq!(v.hermitian_defect(), 0.0);
        }
    }
}
