use num_complex::Complex64;

use super::direct::reconstruct;
use super::stepper::{LawsonRk4, NormGuard, Pair};
use super::trajectory::{SolverOptions, Trajectory};
use super::{check_data, gauge, reduce_initial_data, Nonlinearity, ReducedData};
use crate::error::{Error, Result};
use crate::normal_form::{free_parts, NormalFormKernel};
use crate::params::ModelParams;
use crate::spectral::{apply_multiplier, MultiplierId, Sign, SpectralField};

const HALF_OVER_I: Complex64 = Complex64::new(0.0, -0.5);

/// Remainder `Ψ^±` of `w̃^± = 𝓛^± + h^± + Ψ^±` with the data it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompState {
    pub time: f64,
    pub psi_plus: SpectralField,
    pub psi_minus: SpectralField,
    pub f: SpectralField,
    pub g: SpectralField,
    /// Parameters with `a0`, `a1` taken from the data.
    pub params: ModelParams,
    pub gauged: bool,
}

/// Output of [`integrate_decomposed`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedRun {
    /// `Ψ⁺ + Ψ⁻` in the reduced variable.
    pub psi: Trajectory,
    /// Reconstructed solution.
    pub u: Trajectory,
    pub final_state: DecompState,
}

/// Gauged free waves and normal form corrections at one time.
struct Frame {
    /// `𝓛 + 𝓛̄` (ungauged)
    free: SpectralField,
    /// `h⁺`, `h⁻` in the gauged frame
    h_plus: SpectralField,
    h_minus: SpectralField,
    /// error terms entering the `Ψ⁺` and `Ψ⁻` equations
    err_plus: SpectralField,
    err_minus: SpectralField,
}

struct Decomposer {
    f: SpectralField,
    g: SpectralField,
    params: ModelParams,
    kernel: NormalFormKernel,
    nl: Nonlinearity,
}

impl Decomposer {
    fn gauge(&self, t: f64, x: &SpectralField, sign: Sign) -> Result<SpectralField> {
        if self.params.is_gauge_trivial() {
            Ok(x.clone())
        } else {
            apply_multiplier(x, gauge(t, &self.params, sign))
        }
    }

    /// `h⁺ = e^{-g𝒫} S⁺(a, b)`, `h⁻ = -e^{-g𝒫} S⁻(a, b)` with
    /// `a = e^{g𝒫}𝓛`, `b = e^{g𝒫}𝓛̄`, and the error terms
    /// `Err⁺ = r e^{-g𝒫} D⁺`, `Err⁻ = -r e^{-g𝒫} D⁻`, `r = A₀ + A₁t`.
    fn frame(&self, t: f64) -> Result<Frame> {
        let (l, lbar) = free_parts(&self.f, &self.g, t)?;
        let a = self.gauge(t, &l, Sign::Plus)?;
        let b = self.gauge(t, &lbar, Sign::Plus)?;
        let rate = self.params.drift_rate(t);
        let with_d = rate != 0.0;
        let (sp, dp) = self.kernel.evaluate(Sign::Plus, &a, &b, with_d)?;
        let (sm, dm) = self.kernel.evaluate(Sign::Minus, &a, &b, with_d)?;
        Ok(Frame {
            free: &l + &lbar,
            h_plus: self.gauge(t, &sp, Sign::Minus)?,
            h_minus: self.gauge(t, &sm, Sign::Minus)?.scale_real(-1.0),
            err_plus: self.gauge(t, &dp, Sign::Minus)?.scale_real(rate),
            err_minus: self.gauge(t, &dm, Sign::Minus)?.scale_real(-rate),
        })
    }

    /// Right-hand sides of
    ///
    /// ```text
    /// (∂_t - iL)Ψ⁺ = -(1/2i) Ñ(2F + R, R) - Err⁺
    /// (∂_t + iL)Ψ⁻ = +(1/2i) Ñ(2F + R, R) - Err⁻
    /// ```
    ///
    /// with `F = 𝓛 + 𝓛̄` and `R = h⁺ + h⁻ + Ψ⁺ + Ψ⁻`.
    fn rhs(&self, t: f64, psi: &Pair) -> Result<Pair> {
        let fr = self.frame(t)?;
        let mut r = &fr.h_plus + &fr.h_minus;
        r.axpy(Complex64::new(1.0, 0.0), &psi.plus)?;
        r.axpy(Complex64::new(1.0, 0.0), &psi.minus)?;
        let mut left = r.clone();
        left.axpy(Complex64::new(2.0, 0.0), &fr.free)?;
        let nl = self.nl.apply(
            &self.gauge(t, &left, Sign::Plus)?,
            &self.gauge(t, &r, Sign::Plus)?,
        )?;
        let nl = self.gauge(t, &nl, Sign::Minus)?;
        let mut plus = nl.scale(-HALF_OVER_I);
        plus.axpy(Complex64::new(-1.0, 0.0), &fr.err_plus)?;
        let mut minus = nl.scale(HALF_OVER_I);
        minus.axpy(Complex64::new(-1.0, 0.0), &fr.err_minus)?;
        Ok(Pair { plus, minus })
    }

    /// `(w⁺, w⁻) = e^{g𝒫}(𝓛 + h⁺ + Ψ⁺, 𝓛̄ + h⁻ + Ψ⁻)`.
    fn half_waves(&self, t: f64, psi: &Pair) -> Result<Pair> {
        let fr = self.frame(t)?;
        let (l, lbar) = free_parts(&self.f, &self.g, t)?;
        let plus = &(&l + &fr.h_plus) + &psi.plus;
        let minus = &(&lbar + &fr.h_minus) + &psi.minus;
        Ok(Pair {
            plus: self.gauge(t, &plus, Sign::Plus)?,
            minus: self.gauge(t, &minus, Sign::Plus)?,
        })
    }
}

/// Integrates the remainder system and reconstructs `u`.
///
/// Returns the `Ψ⁺ + Ψ⁻` trajectory and the `u` trajectory. Like
/// [`super::integrate_direct`], the drift comes from the means of the data.
pub fn integrate_decomposed(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
) -> Result<(Trajectory, Trajectory)> {
    let run = integrate_decomposed_with(u0, u1, params, &SolverOptions::default())?;
    Ok((run.psi, run.u))
}

pub fn integrate_decomposed_with(
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
    options: &SolverOptions,
) -> Result<DecomposedRun> {
    check_data(u0, u1, params)?;
    if options.drift != super::MeanDrift::Reduced {
        return Err(Error::Domain(
            "the decomposed solver only supports the reduced mean drift".into(),
        ));
    }
    let data: ReducedData = reduce_initial_data(u0, u1, params.alpha)?;
    let p = data.drift_params(params);
    let (steps, dt) = options.grid(p.horizon, p.dt)?;
    let every = steps / options.outputs;

    let dec = Decomposer {
        f: data.f.clone(),
        g: data.g.clone(),
        params: p,
        kernel: NormalFormKernel::new(p.trunc, p.alpha),
        nl: Nonlinearity::new(p.trunc, p.alpha),
    };
    let stepper = LawsonRk4::new(p.trunc, dt);

    let fr0 = dec.frame(0.0)?;
    let mut psi = Pair {
        plus: fr0.h_plus.scale_real(-1.0),
        minus: fr0.h_minus.scale_real(-1.0),
    };
    let guard = NormGuard::new(&dec.half_waves(0.0, &psi)?);
    let mut psi_traj = Trajectory::new(options.norm_orders.clone());
    let mut u_traj = Trajectory::new(options.norm_orders.clone());
    psi_traj.push(0.0, &psi.plus + &psi.minus)?;
    u_traj.push(0.0, reconstruct(&data, &dec.half_waves(0.0, &psi)?, 0.0)?)?;

    let mut rhs = |t: f64, x: &Pair| dec.rhs(t, x);
    for k in 0..steps {
        let t = k as f64 * dt;
        psi = stepper.step(t, &psi, &mut rhs)?;
        let t_next = (k + 1) as f64 * dt;
        guard.check(t_next, &psi)?;
        if (k + 1) % every == 0 {
            psi_traj.push(t_next, &psi.plus + &psi.minus)?;
            u_traj.push(t_next, reconstruct(&data, &dec.half_waves(t_next, &psi)?, t_next)?)?;
        }
    }
    Ok(DecomposedRun {
        psi: psi_traj,
        u: u_traj,
        final_state: DecompState {
            time: p.horizon,
            psi_plus: psi.plus,
            psi_minus: psi.minus,
            f: data.f,
            g: data.g,
            params: p,
            gauged: !p.is_gauge_trivial(),
        },
    })
}

impl DecompState {
    /// Gauged normal form corrections `(h⁺, h⁻)` at the state's time, with
    /// the sign convention of the remainder system.
    pub fn corrections(&self) -> Result<(SpectralField, SpectralField)> {
        let dec = Decomposer {
            f: self.f.clone(),
            g: self.g.clone(),
            params: self.params,
            kernel: NormalFormKernel::new(self.params.trunc, self.params.alpha),
            nl: Nonlinearity::new(self.params.trunc, self.params.alpha),
        };
        let fr = dec.frame(self.time)?;
        Ok((fr.h_plus, fr.h_minus))
    }
}

/// `e^{g𝒫}` applied to a reduced field; identity when the drift vanishes.
pub(crate) fn gauge_up(t: f64, params: &ModelParams, x: &SpectralField) -> Result<SpectralField> {
    if params.is_gauge_trivial() {
        Ok(x.clone())
    } else {
        apply_multiplier(x, MultiplierId::Gauge {
            t,
            a0: params.a0,
            a1: params.a1,
            sign: Sign::Plus,
        })
    }
}
