use num_complex::Complex64;

use super::stepper::{LawsonRk4, NormGuard, Pair};
use super::trajectory::{SolverOptions, Trajectory};
use super::{check_data, reduce_initial_data, MeanDrift, Nonlinearity, ReducedData};
use crate::error::Result;
use crate::params::ModelParams;
use crate::spectral::{apply_multiplier, MultiplierId, SpectralField};

const HALF_OVER_I: Complex64 = Complex64::new(0.0, -0.5);

/// Integrates the half-wave system for `(w⁺, w⁻)` and reconstructs `u`.
///
/// `params.a0` and `params.a1` are ignored: the drift is taken from the means
/// of the data. Defaults of [`SolverOptions`] are used.
pub fn integrate_direct(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
) -> Result<Trajectory> {
    integrate_direct_with(u0, u1, params, &SolverOptions::default())
}

pub fn integrate_direct_with(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
    options: &SolverOptions,
) -> Result<Trajectory> {
    Ok(run_direct(u0, u1, params, options)?.0)
}

/// [`integrate_direct_with`] that also returns the final half waves.
pub(crate) fn run_direct(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
    options: &SolverOptions,
) -> Result<(Trajectory, Pair)> {
    check_data(u0, u1, params)?;
    let data = reduce_initial_data(u0, u1, params.alpha)?;
    let p = data.drift_params(params);
    let (steps, dt) = options.grid(p.horizon, p.dt)?;
    let every = steps / options.outputs;

    let nl = Nonlinearity::new(p.trunc, p.alpha);
    let stepper = LawsonRk4::new(p.trunc, dt);
    let drift = options.drift;
    let mut rhs = |t: f64, x: &Pair| -> Result<Pair> {
        let w = &x.plus + &x.minus;
        let mut force = nl.apply(&w, &w)?;
        let rate = p.drift_rate(t);
        match drift {
            MeanDrift::Reduced => {
                let mut plus = force.scale(-HALF_OVER_I);
                let mut minus = force.scale(HALF_OVER_I);
                if rate != 0.0 {
                    let dp = apply_multiplier(&x.plus, MultiplierId::P)?;
                    let dm = apply_multiplier(&x.minus, MultiplierId::P)?;
                    plus.axpy(Complex64::new(rate, 0.0), &dp)?;
                    minus.axpy(Complex64::new(rate, 0.0), &dm)?;
                }
                Ok(Pair { plus, minus })
            }
            MeanDrift::Coupled => {
                if rate != 0.0 {
                    force.axpy(Complex64::new(rate, 0.0), &apply_multiplier(&w, MultiplierId::P)?)?;
                }
                Ok(Pair {
                    plus: force.scale(-HALF_OVER_I),
                    minus: force.scale(HALF_OVER_I),
                })
            }
        }
    };

    let mut state = initial_half_waves(&data)?;
    let guard = NormGuard::new(&state);
    let mut traj = Trajectory::new(options.norm_orders.clone());
    traj.push(0.0, reconstruct(&data, &state, 0.0)?)?;
    for k in 0..steps {
        let t = k as f64 * dt;
        state = stepper.step(t, &state, &mut rhs)?;
        let t_next = (k + 1) as f64 * dt;
        guard.check(t_next, &state)?;
        if (k + 1) % every == 0 {
            traj.push(t_next, reconstruct(&data, &state, t_next)?)?;
        }
    }
    Ok((traj, state))
}

/// `w⁺(0) = ½f - (i/2)L^{-1}g`, `w⁻(0) = ½f + (i/2)L^{-1}g`.
pub(crate) fn initial_half_waves(data: &ReducedData) -> Result<Pair> {
    let lg = apply_multiplier(&data.g, MultiplierId::Linv)?;
    let mut plus = data.f.scale_real(0.5);
    plus.axpy(Complex64::new(0.0, -0.5), &lg)?;
    let mut minus = data.f.scale_real(0.5);
    minus.axpy(Complex64::new(0.0, 0.5), &lg)?;
    Ok(Pair { plus, minus })
}

/// `u = m(t) + ⟨∇⟩^α (w⁺ + w⁻)`. The real flag is set only if the result is
/// Hermitian to `1e-12`.
pub(crate) fn reconstruct(data: &ReducedData, x: &Pair, t: f64) -> Result<SpectralField> {
    let mut w = x.plus.clone();
    w.axpy(Complex64::new(1.0, 0.0), &x.minus)?;
    let u = data.restore(&w, t)?;
    SpectralField::from_coeffs(u.trunc(), u.into_coeffs())
}
