use num_complex::Complex64;

use super::{p_of, ModeTables, SignTriple};
use crate::error::Result;
use crate::spectral::{Sign, SpectralField};

/// Precomputed symbol tables for repeated evaluation of `h^ε` and its gauge
/// error term at one truncation and one `α`.
///
/// For each `ε` the kernel stores `σ^{ε;+,+}`, `σ^{ε;+,-}`, `σ^{ε;-,-}` and
/// the derivative weights `σ(ξ,η)(𝒫(ξ) + 𝒫(η) - 𝒫(ξ+η))` on the full
/// `(2N+1)²` lattice (zero on excluded pairs). Memory is `12 (2N+1)²`
/// doubles.
#[derive(Debug, Clone)]
pub struct NormalFormKernel {
    trunc: usize,
    alpha: f64,
    plus: Tables,
    minus: Tables,
}

#[derive(Debug, Clone)]
struct Tables {
    pp: Vec<f64>,
    pm: Vec<f64>,
    mm: Vec<f64>,
    dpp: Vec<f64>,
    dpm: Vec<f64>,
    dmm: Vec<f64>,
}

impl Tables {
    fn build(modes: &ModeTables, eps: Sign) -> Self {
        let n = modes.trunc;
        let width = (2 * n + 1) as usize;
        let mut t = Tables {
            pp: vec![0.0; width * width],
            pm: vec![0.0; width * width],
            mm: vec![0.0; width * width],
            dpp: vec![0.0; width * width],
            dpm: vec![0.0; width * width],
            dmm: vec![0.0; width * width],
        };
        let e = eps.value();
        for xi in (-n..=n).filter(|&x| x != 0) {
            for eta in modes.eta_range(xi) {
                if eta == 0 || eta == -xi {
                    continue;
                }
                let at = modes.idx(xi) * width + modes.idx(eta);
                let dp = p_of(xi) + p_of(eta) - p_of(xi + eta);
                let pp = modes.symbol(xi, eta, (e, 1.0, 1.0));
                let pm = modes.symbol(xi, eta, (e, 1.0, -1.0));
                let mm = modes.symbol(xi, eta, (e, -1.0, -1.0));
                t.pp[at] = pp;
                t.pm[at] = 2.0 * pm;
                t.mm[at] = mm;
                t.dpp[at] = pp * dp;
                t.dpm[at] = 2.0 * pm * dp;
                t.dmm[at] = mm * dp;
            }
        }
        t
    }
}

impl NormalFormKernel {
    pub fn new(trunc: usize, alpha: f64) -> Self {
        let modes = ModeTables::new(trunc, alpha);
        Self {
            trunc,
            alpha,
            plus: Tables::build(&modes, Sign::Plus),
            minus: Tables::build(&modes, Sign::Minus),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Returns `(S, D)` where
    ///
    /// ```text
    /// S = T^{ε;+,+}(a,a) + 2T^{ε;+,-}(a,b) + T^{ε;-,-}(b,b)
    /// D = same sum with σ replaced by σ·(𝒫(ξ) + 𝒫(η) - 𝒫(ξ+η))
    /// ```
    ///
    /// `a`, `b` play the roles of (gauged) `𝓛` and `𝓛̄`. `D` is only
    /// computed when `with_derivative` is set (otherwise it is zero).
    pub fn evaluate(
        &self,
        eps: Sign,
        a: &SpectralField,
        b: &SpectralField,
        with_derivative: bool,
    ) -> Result<(SpectralField, SpectralField)> {
        a.check_trunc(b)?;
        if a.trunc() != self.trunc {
            return Err(crate::Error::TruncationMismatch {
                left: self.trunc,
                right: a.trunc(),
            });
        }
        let t = match eps {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        };
        let n = self.trunc as i64;
        let width = 2 * self.trunc + 1;
        let (ac, bc) = (a.coeffs(), b.coeffs());
        let zero = Complex64::new(0.0, 0.0);
        let mut s = vec![zero; width];
        let mut d = vec![zero; width];
        for i in 0..width {
            let xi = i as i64 - n;
            if xi == 0 {
                continue;
            }
            let (ax, bx) = (ac[i], bc[i]);
            if ax == zero && bx == zero {
                continue;
            }
            let lo = (-n).max(-n - xi);
            let hi = n.min(n - xi);
            let j0 = (lo + n) as usize;
            let j1 = (hi + n) as usize;
            let k0 = (lo + xi + n) as usize;
            let row = i * width;
            let (pp, pm, mm) = (
                &t.pp[row + j0..=row + j1],
                &t.pm[row + j0..=row + j1],
                &t.mm[row + j0..=row + j1],
            );
            let out = &mut s[k0..k0 + (j1 - j0 + 1)];
            for (jj, o) in out.iter_mut().enumerate() {
                let j = j0 + jj;
                let (ae, be) = (ac[j], bc[j]);
                *o += ax * (ae * pp[jj] + be * pm[jj]) + bx * be * mm[jj];
            }
            if with_derivative {
                let (dpp, dpm, dmm) = (
                    &t.dpp[row + j0..=row + j1],
                    &t.dpm[row + j0..=row + j1],
                    &t.dmm[row + j0..=row + j1],
                );
                let out = &mut d[k0..k0 + (j1 - j0 + 1)];
                for (jj, o) in out.iter_mut().enumerate() {
                    let j = j0 + jj;
                    let (ae, be) = (ac[j], bc[j]);
                    *o += ax * (ae * dpp[jj] + be * dpm[jj]) + bx * be * dmm[jj];
                }
            }
        }
        Ok((
            SpectralField::from_raw(self.trunc, s),
            SpectralField::from_raw(self.trunc, d),
        ))
    }

    /// `h^ε` for already gauged arguments (no outer gauge applied).
    pub fn h_sum(&self, eps: Sign, a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
        Ok(self.evaluate(eps, a, b, false)?.0)
    }

    /// Signs of the three terms, for reference.
    pub fn term_signs(eps: Sign) -> [SignTriple; 3] {
        [
            SignTriple::new(eps, Sign::Plus, Sign::Plus),
            SignTriple::new(eps, Sign::Plus, Sign::Minus),
            SignTriple::new(eps, Sign::Minus, Sign::Minus),
        ]
    }
}
