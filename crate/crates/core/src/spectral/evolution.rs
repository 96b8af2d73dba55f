use super::field::SpectralField;
use super::multiplier::{cis, dispersion, Sign};
use crate::error::Result;

/// Free evolution `cos(tL) f + sin(tL) L^{-1} g`.
///
/// The zero mode follows the limit `f̂(0) + t ĝ(0)`, i.e. the affine law of
/// the mean.
pub fn free_evolution(f: &SpectralField, g: &SpectralField, t: f64) -> Result<SpectralField> {
    f.check_trunc(g)?;
    let mut out = f.map_modes(g.is_real(), |n, c| {
        if n == 0 {
            c + g.get(0) * t
        } else {
            let mu = dispersion(n);
            c * (t * mu).cos() + g.get(n) * ((t * mu).sin() / mu)
        }
    });
    if f.is_real() && g.is_real() {
        out.symmetrize();
    }
    Ok(out)
}

/// Half-wave flow `e^{± i t L} u`.
pub fn half_wave(u: &SpectralField, t: f64, sign: Sign) -> SpectralField {
    let s = sign.value() * t;
    u.map_modes(t == 0.0, |n, c| c * cis(s * dispersion(n)))
}

/// Time derivative of [`free_evolution`]: `-L sin(tL) f + cos(tL) g`.
pub fn free_velocity(f: &SpectralField, g: &SpectralField, t: f64) -> Result<SpectralField> {
    f.check_trunc(g)?;
    Ok(f.map_modes(g.is_real(), |n, c| {
        if n == 0 {
            g.get(0)
        } else {
            let mu = dispersion(n);
            -c * (mu * (t * mu).sin()) + g.get(n) * (t * mu).cos()
        }
    }))
}

/// Discrete energy `Σ (μ_n² |f̂_n|² + |ĝ_n|²)` of a position/velocity pair.
pub fn wave_energy(f: &SpectralField, g: &SpectralField) -> f64 {
    f.modes()
        .map(|(n, c)| {
            let mu = dispersion(n);
            mu * mu * c.norm_sqr() + g.get(n).norm_sqr()
        })
        .sum()
}


#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn single_mode_cosine() {
        let f = SpectralField::cosine(8, 1, 1.0).unwrap();
        let g = SpectralField::zeros(8);
        for t in [0.0, 0.3, 2.7] {
            let w = free_evolution(&f, &g, t).unwrap();
            let expect = SpectralField::cosine(8, 1, (2f64.sqrt() * t).cos()).unwrap();
            assert!(w.l2_distance(&expect).unwrap() < 1e-15);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let z = SpectralField::zeros(5);
        assert_eq!(free_evolution(&z, &z, 1.3).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn mean_velocity_moves_the_mean_linearly() {
        let f = SpectralField::zeros(5);
        let g = SpectralField::constant(5, 1.0);
        let w = free_evolution(&f, &g, 2.0).unwrap();
        assert!(w.l2_distance(&SpectralField::constant(5, 2.0)).unwrap() < 1e-15);
    }

    #[test]
    fn half_wave_examples() {
        let u = SpectralField::from_fn(6, |n| Complex64::new(1.0 / (1 + n.abs()) as f64, 0.2 * n as f64));
        assert_eq!(half_wave(&u, 0.0, Sign::Plus), u);
        let back = half_wave(&half_wave(&u, 1.7, Sign::Plus), 1.7, Sign::Minus);
        assert!(back.l2_distance(&u).unwrap() < 1e-15);

        let e1 = SpectralField::mode(4, 1, Complex64::new(1.0, 0.0)).unwrap();
        let w = half_wave(&e1, std::f64::consts::PI, Sign::Plus);
        let expect = Complex64::from_polar(1.0, std::f64::consts::PI * 2f64.sqrt());
        assert_relative_eq!((w.get(1) - expect).norm(), 0.0, epsilon = 1e-15);
    }
}
