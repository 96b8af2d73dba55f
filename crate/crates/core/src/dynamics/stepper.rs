//! Integrating-factor fourth-order Runge-Kutta for the pair
//! `(∂_t - iL) X⁺ = N⁺(t, X)`, `(∂_t + iL) X⁻ = N⁻(t, X)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{cis, dispersion, SpectralField};

/// `(X⁺, X⁻)`
#[derive(Debug, Clone)]
pub(crate) struct Pair {
    pub plus: SpectralField,
    pub minus: SpectralField,
}

impl Pair {
    pub fn l2_norm(&self) -> f64 {
        self.plus.l2_norm().hypot(self.minus.l2_norm())
    }

    fn is_finite(&self) -> bool {
        self.plus
            .coeffs()
            .iter()
            .chain(self.minus.coeffs())
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `self + h · k`
    fn plus_scaled(&self, h: f64, k: &Pair) -> Pair {
        let mut out = self.clone();
        out.plus.axpy(Complex64::new(h, 0.0), &k.plus).expect("same truncation");
        out.minus.axpy(Complex64::new(h, 0.0), &k.minus).expect("same truncation");
        out
    }
}

/// Precomputed phases `e^{iμ_n h/2}` and `e^{iμ_n h}` for one step size.
pub(crate) struct LawsonRk4 {
    trunc: i64,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl LawsonRk4 {
    pub fn new(trunc: usize, dt: f64) -> Self {
        let n = trunc as i64;
        Self {
            trunc: n,
            dt,
            half: (-n..=n).map(|k| cis(0.5 * dt * dispersion(k))).collect(),
            full: (-n..=n).map(|k| cis(dt * dispersion(k))).collect(),
        }
    }

    /// Free flow over `h/2` (`half`) or `h` for both components.
    fn flow(&self, x: &Pair, half: bool) -> Pair {
        let table = if half { &self.half } else { &self.full };
        let n = self.trunc;
        let at = |k: i64| table[(k + n) as usize];
        Pair {
            plus: x.plus.map_modes(false, |k, c| c * at(k)),
            minus: x.minus.map_modes(false, |k, c| c * at(k).conj()),
        }
    }

    /// One step from `t`.
    pub fn step(
        &self,
        t: f64,
        y: &Pair,
        rhs: &mut impl FnMut(f64, &Pair) -> Result<Pair>,
    ) -> Result<Pair> {
        let h = self.dt;
        let k1 = rhs(t, y)?;
        let y_half = self.flow(y, true);
        let k2 = rhs(t + 0.5 * h, &self.flow(&y.plus_scaled(0.5 * h, &k1), true))?;
        let k3 = rhs(t + 0.5 * h, &y_half.plus_scaled(0.5 * h, &k2))?;
        let y_full = self.flow(y, false);
        let k3_flowed = self.flow(&k3, true);
        let k4 = rhs(t + h, &y_full.plus_scaled(h, &k3_flowed))?;

        let mut mid = k2;
        mid = mid.plus_scaled(1.0, &k3);
        let mid = self.flow(&mid, true);
        let k1 = self.flow(&k1, false);
        let mut out = y_full.plus_scaled(h / 6.0, &k1);
        out = out.plus_scaled(h / 3.0, &mid);
        Ok(out.plus_scaled(h / 6.0, &k4))
    }
}

/// Norm guard: growth beyond `1e6` times the reference, or non-finite
/// values, abort the integration.
pub(crate) struct NormGuard {
    reference: f64,
}

pub(crate) const GROWTH_LIMIT: f64 = 1e6;

impl NormGuard {
    pub fn new(initial: &Pair) -> Self {
        Self {
            reference: initial.l2_norm(),
        }
    }

    pub fn check(&self, t: f64, state: &Pair) -> Result<()> {
        let norm = state.l2_norm();
        if !state.is_finite() {
            return Err(Error::Instability {
                time: t,
                growth: f64::INFINITY,
            });
        }
        if self.reference > 0.0 && norm > GROWTH_LIMIT * self.reference {
            return Err(Error::Instability {
                time: t,
                growth: norm / self.reference,
            });
        }
        Ok(())
    }
}
