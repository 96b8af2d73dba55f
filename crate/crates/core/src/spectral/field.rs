use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncated Fourier coefficients `c_n`, `n = -N..=N`, of a 2π-periodic
/// function `u(x) = Σ c_n e^{inx}`.
///
/// `real` records that the coefficients satisfy `c_{-n} = conj(c_n)`, i.e.
/// that `u` is real valued. Operations that preserve real-valuedness keep the
/// flag, everything else clears it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    trunc: usize,
    coeffs: Vec<Complex64>,
    real: bool,
}

/// Tolerance used when a real flag is asserted on caller supplied data.
const HERMITIAN_TOL: f64 = 1e-12;

impl SpectralField {
    pub fn zeros(trunc: usize) -> Self {
        Self {
            trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * trunc + 1],
            real: true,
        }
    }

    /// Builds a field from `2N + 1` coefficients ordered `-N..=N`.
    /// The result is flagged real if the data is Hermitian to `1e-12`
    /// (relative to the largest coefficient).
    pub fn from_coeffs(trunc: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * trunc + 1 {
            return Err(Error::Malformed(format!(
                "expected {} coefficients for truncation {}, got {}",
                2 * trunc + 1,
                trunc,
                coeffs.len()
            )));
        }
        let mut field = Self {
            trunc,
            coeffs,
            real: false,
        };
        field.real = field.hermitian_defect() <= HERMITIAN_TOL * field.max_abs().max(1.0);
        Ok(field)
    }

    /// Builds a field by evaluating `f(n)` for every mode.
    pub fn from_fn(trunc: usize, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let n = trunc as i64;
        let coeffs = (-n..=n).map(&mut f).collect();
        let mut field = Self {
            trunc,
            coeffs,
            real: false,
        };
        field.real = field.hermitian_defect() == 0.0;
        field
    }

    /// Wraps raw coefficients; `real` is set only if the data is exactly
    /// Hermitian.
    pub(crate) fn from_raw(trunc: usize, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), 2 * trunc + 1);
        let mut field = Self {
            trunc,
            coeffs,
            real: false,
        };
        field.real = field.hermitian_defect() == 0.0;
        field
    }

    /// Real field from the nonnegative half `c_0, c_1, ..., c_N`; the
    /// negative modes are filled in by conjugation and `Im c_0` is dropped.
    pub fn real_from_half(trunc: usize, half: &[Complex64]) -> Result<Self> {
        if half.len() != trunc + 1 {
            return Err(Error::Malformed(format!(
                "expected {} nonnegative modes, got {}",
                trunc + 1,
                half.len()
            )));
        }
        let mut field = Self::zeros(trunc);
        field.coeffs[trunc] = Complex64::new(half[0].re, 0.0);
        for (k, c) in half.iter().enumerate().skip(1) {
            field.coeffs[trunc + k] = *c;
            field.coeffs[trunc - k] = c.conj();
        }
        Ok(field)
    }

    /// Single Fourier mode `amp · e^{i n x}`.
    pub fn mode(trunc: usize, n: i64, amp: Complex64) -> Result<Self> {
        let mut field = Self::zeros(trunc);
        field.set(n, amp)?;
        Ok(field)
    }

    /// `amp · cos(n x)` for real `amp`.
    pub fn cosine(trunc: usize, n: i64, amp: f64) -> Result<Self> {
        let mut field = Self::zeros(trunc);
        if n == 0 {
            field.set(0, Complex64::new(amp, 0.0))?;
        } else {
            field.set(n, Complex64::new(amp / 2.0, 0.0))?;
            field.set(-n, Complex64::new(amp / 2.0, 0.0))?;
        }
        Ok(field)
    }

    /// Constant function.
    pub fn constant(trunc: usize, value: f64) -> Self {
        let mut field = Self::zeros(trunc);
        field.coeffs[trunc] = Complex64::new(value, 0.0);
        field
    }

    #[inline]
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.real
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mutable access to the coefficients; clears the real flag.
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        self.real = false;
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Iterator over `(n, c_n)` for `n = -N..=N`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.trunc as i64;
        (-n..=n).zip(self.coeffs.iter().copied())
    }

    #[inline]
    fn slot(&self, n: i64) -> Option<usize> {
        let idx = n + self.trunc as i64;
        (n.unsigned_abs() as usize <= self.trunc).then_some(idx as usize)
    }

    /// Coefficient of `e^{inx}`; modes beyond the truncation are zero.
    #[inline]
    pub fn get(&self, n: i64) -> Complex64 {
        self.slot(n)
            .map(|i| self.coeffs[i])
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Sets a single coefficient. Clears the real flag unless the field stays
    /// Hermitian.
    pub fn set(&mut self, n: i64, value: Complex64) -> Result<()> {
        let i = self.slot(n).ok_or_else(|| {
            Error::Domain(format!("mode {n} outside truncation {}", self.trunc))
        })?;
        self.coeffs[i] = value;
        self.real = self.hermitian_defect() == 0.0;
        Ok(())
    }

    /// Mean value `c_0`.
    #[inline]
    pub fn mean(&self) -> Complex64 {
        self.coeffs[self.trunc]
    }

    pub fn has_zero_mean(&self) -> bool {
        self.mean() == Complex64::new(0.0, 0.0)
    }

    /// Copy with `c_0` set to zero.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[self.trunc] = Complex64::new(0.0, 0.0);
        out
    }

    /// `max_n |c_{-n} - conj(c_n)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let len = self.coeffs.len();
        (0..=self.trunc)
            .map(|k| (self.coeffs[self.trunc + k] - self.coeffs[len - 1 - (self.trunc + k)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replaces the field by its Hermitian part `(c_n + conj(c_{-n})) / 2`
    /// and sets the real flag.
    pub fn symmetrize(&mut self) {
        let n = self.trunc;
        self.coeffs[n] = Complex64::new(self.coeffs[n].re, 0.0);
        for k in 1..=n {
            let avg = (self.coeffs[n + k] + self.coeffs[n - k].conj()) * 0.5;
            self.coeffs[n + k] = avg;
            self.coeffs[n - k] = avg.conj();
        }
        self.real = true;
    }

    /// The field of the complex-conjugate function: `c_n ↦ conj(c_{-n})`.
    pub fn conj_reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self {
            trunc: self.trunc,
            coeffs,
            real: self.real,
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Unweighted coefficient `l²` norm (equals the `L²(dx/2π)` norm).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `l²` distance to another field of the same truncation.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        self.check_trunc(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Multiplies every coefficient by a complex scalar.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            real: self.real && factor.im == 0.0,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self + factor · other`, in place.
    pub fn axpy(&mut self, factor: Complex64, other: &Self) -> Result<()> {
        self.check_trunc(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
        self.real = self.real && other.real && factor.im == 0.0;
        Ok(())
    }

    /// Coefficient-wise map with the mode index; the result is flagged real
    /// when `keeps_real` is set and the input was real.
    pub fn map_modes(&self, keeps_real: bool, mut f: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        let n = self.trunc as i64;
        let coeffs = (-n..=n)
            .zip(&self.coeffs)
            .map(|(k, c)| f(k, *c))
            .collect();
        Self {
            trunc: self.trunc,
            coeffs,
            real: self.real && keeps_real,
        }
    }

    /// Same function at a different truncation (zero padded or cut).
    pub fn retruncate(&self, trunc: usize) -> Self {
        let mut out = Self::zeros(trunc);
        let m = trunc.min(self.trunc) as i64;
        for k in -m..=m {
            out.coeffs[(k + trunc as i64) as usize] = self.get(k);
        }
        out.real = self.real;
        out
    }

    pub(crate) fn check_trunc(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    /// Flat record `[N, re_{-N}, im_{-N}, ..., re_N, im_N]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(1 + 2 * self.coeffs.len());
        out.push(self.trunc as f64);
        for c in &self.coeffs {
            out.push(c.re);
            out.push(c.im);
        }
        out
    }

    /// Inverse of [`SpectralField::to_flat`].
    pub fn from_flat(record: &[f64]) -> Result<Self> {
        let (&head, rest) = record
            .split_first()
            .ok_or_else(|| Error::Malformed("empty record".into()))?;
        if head < 0.0 || head.fract() != 0.0 {
            return Err(Error::Malformed(format!("bad truncation {head}")));
        }
        let trunc = head as usize;
        if rest.len() != 2 * (2 * trunc + 1) {
            return Err(Error::Malformed(format!(
                "record for truncation {trunc} must carry {} values, got {}",
                2 * (2 * trunc + 1),
                rest.len()
            )));
        }
        let coeffs = rest
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        Self::from_coeffs(trunc, coeffs)
    }

    /// Little-endian binary dump of the flat record.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.to_flat().iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(8) {
            return Err(Error::Malformed(format!(
                "binary record length {} is not a multiple of 8",
                bytes.len()
            )));
        }
        let flat: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
            .collect();
        Self::from_flat(&flat)
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    /// Panics on truncation mismatch; use [`SpectralField::axpy`] for a
    /// checked version.
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), rhs)
            .expect("adding fields of different truncation");
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), rhs)
            .expect("subtracting fields of different truncation");
        out
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;

    fn neg(self) -> SpectralField {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, rhs: f64) -> SpectralField {
        self.scale_real(rhs)
    }
}
