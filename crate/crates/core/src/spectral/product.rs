use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::SpectralField;
use crate::error::Result;

/// Alias-free product of two truncated fields via zero-padded transforms.
///
/// The transform length is the smallest power of two `M ≥ 4N + 1`; the full
/// product lives on `[-2N, 2N]`, so the circular convolution of length `M`
/// does not wrap and the result equals the exact convolution truncated back
/// to `[-N, N]`.
#[derive(Clone)]
pub struct ProductKernel {
    trunc: usize,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ProductKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProductKernel")
            .field("trunc", &self.trunc)
            .field("len", &self.len)
            .finish()
    }
}

impl ProductKernel {
    pub fn new(trunc: usize) -> Self {
        let len = (4 * trunc + 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        Self {
            trunc,
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Padded transform length.
    pub fn padded_len(&self) -> usize {
        self.len
    }

    /// Grid values `u(2π j / M)` of a field.
    fn to_grid(&self, u: &SpectralField) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (n, c) in u.modes() {
            buf[n.rem_euclid(self.len as i64) as usize] = c;
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// `u · v` truncated to `[-N, N]`.
    pub fn product(&self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        u.check_trunc(v)?;
        if u.trunc() != self.trunc {
            return Err(crate::Error::TruncationMismatch {
                left: self.trunc,
                right: u.trunc(),
            });
        }
        let mut grid = self.to_grid(u);
        if std::ptr::eq(u, v) {
            grid.iter_mut().for_each(|x| *x = *x * *x);
        } else {
            let other = self.to_grid(v);
            grid.iter_mut().zip(&other).for_each(|(x, y)| *x *= y);
        }
        self.forward.process(&mut grid);
        let scale = 1.0 / self.len as f64;
        let mut out = SpectralField::from_fn(self.trunc, |k| {
            grid[k.rem_euclid(self.len as i64) as usize] * scale
        });
        if u.is_real() && v.is_real() {
            out.symmetrize();
        }
        Ok(out)
    }
}

/// Exact dealiased product `u · v` truncated to `[-N, N]`.
pub fn quadratic_product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.check_trunc(v)?;
    ProductKernel::new(u.trunc()).product(u, v)
}
