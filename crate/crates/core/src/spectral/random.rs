use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::multiplier::bracket;

/// Decay slack `δ₀` of [`random_sobolev_field`].
pub const ROUGH_SLACK: f64 = 0.01;

/// Real, mean-zero field with `|c_n| = ⟨n⟩^{-s-1/2-δ₀}` and uniformly random
/// phases.
///
/// Phases are drawn for `n = 1, 2, ...` in order, so for a fixed seed the
/// field at truncation `N` is the truncation of the field at any `N' > N`.
/// The `H^s` norm stays bounded as `N` grows while `H^{s'}` norms with
/// `s' > s + δ₀` diverge.
pub fn random_sobolev_field(s: f64, trunc: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut half = vec![Complex64::new(0.0, 0.0); trunc + 1];
    for (k, slot) in half.iter_mut().enumerate().skip(1) {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let amp = bracket(k as i64).powf(-s - 0.5 - ROUGH_SLACK);
        *slot = Complex64::from_polar(amp, theta);
    }
    SpectralField::real_from_half(trunc, &half).expect("half spectrum has N + 1 entries")
}
