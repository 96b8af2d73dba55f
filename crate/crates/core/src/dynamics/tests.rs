use approx::assert_relative_eq;
use num_complex::Complex64;

use super::direct::run_direct;
use super::*;
use crate::normal_form::assemble_h;
use crate::spectral::{free_evolution, random_sobolev_field, sobolev_norm};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real data on modes `1..=5` with geometric decay, plus the given means.
fn smooth_data(trunc: usize, amp: f64, mean0: f64, mean1: f64) -> (SpectralField, SpectralField) {
    let mk = |phase: f64, scale: f64, mean: f64| {
        let mut half = vec![c(mean, 0.0)];
        for k in 1..=trunc {
            half.push(if k <= 5 {
                Complex64::from_polar(scale * amp * 0.5f64.powi(k as i32), phase * k as f64)
            } else {
                c(0.0, 0.0)
            });
        }
        SpectralField::real_from_half(trunc, &half).unwrap()
    };
    (mk(0.7, 1.0, mean0), mk(-1.1, 0.8, mean1))
}

fn params(trunc: usize, dt: f64, horizon: f64) -> ModelParams {
    ModelParams {
        trunc,
        dt,
        horizon,
        ..ModelParams::default()
    }
}

#[test]
fn reduce_examples() {
    let one = SpectralField::constant(8, 1.0);
    let zero = SpectralField::zeros(8);
    let r = reduce_initial_data(&one, &zero, 0.3).unwrap();
    assert_eq!(r.f.max_abs(), 0.0);
    assert_eq!(r.mean0, 1.0);
    assert_eq!(r.a0(), 2.0);

    let cos = SpectralField::cosine(8, 1, 1.0).unwrap();
    let r = reduce_initial_data(&cos, &zero, 0.0).unwrap();
    assert_eq!(r.f, cos);
    assert_eq!(r.a0(), 0.0);

    let (u0, u1) = smooth_data(8, 1.0, 0.4, -0.2);
    let r = reduce_initial_data(&u0, &u1, 0.3).unwrap();
    let back = r.restore(&r.f, 0.0).unwrap();
    assert!(back.l2_distance(&u0).unwrap() <= 1e-14 * u0.l2_norm());
    assert_eq!(r.a1(), -0.4);
}

#[test]
fn nonlinearity_examples() {
    let e1 = SpectralField::mode(4, 1, c(1.0, 0.0)).unwrap();
    let n = nonlinearity_n(&e1, &e1, 0.0).unwrap();
    assert_relative_eq!(n.get(2).re, -2.0 / 5f64.sqrt(), max_relative = 1e-14);
    assert!((n.get(2).re + 0.8944).abs() < 1e-4);

    // u = 1, α = 0: 𝓝(1, v) = 𝒫 v.
    let v = random_sobolev_field(0.5, 10, 5);
    let one = SpectralField::constant(10, 1.0);
    let n = nonlinearity_n(&one, &v, 0.0).unwrap();
    let pv = apply_multiplier(&v, MultiplierId::P).unwrap();
    assert!(n.l2_distance(&pv).unwrap() <= 1e-14 * pv.l2_norm());

    let u = random_sobolev_field(0.2, 10, 6);
    let a = nonlinearity_n(&u, &v, 0.3).unwrap();
    let b = nonlinearity_n(&v, &u, 0.3).unwrap();
    assert!(a.l2_distance(&b).unwrap() <= 1e-15 * a.l2_norm());
    assert_eq!(a.mean(), c(0.0, 0.0));
}

#[test]
fn gauged_nonlinearity_examples() {
    let u = random_sobolev_field(0.2, 10, 1);
    let v = random_sobolev_field(0.4, 10, 2);
    let plain = nonlinearity_n(&u, &v, 0.3).unwrap();
    let p0 = ModelParams::default();
    assert_eq!(gauged_nonlinearity(&u, &v, 0.7, &p0).unwrap(), plain);
    let p1 = ModelParams { a0: 0.8, a1: 2.0, ..p0 };
    let at0 = gauged_nonlinearity(&u, &v, 0.0, &p1).unwrap();
    assert!(at0.l2_distance(&plain).unwrap() <= 1e-15 * plain.l2_norm());

    let p = ModelParams { a0: 1.0, alpha: 0.3, ..p0 };
    let e1 = SpectralField::mode(4, 1, c(1.0, 0.0)).unwrap();
    let n = gauged_nonlinearity(&e1, &e1, 1.0, &p).unwrap();
    let b = |k: f64| (1.0 + k * k).sqrt();
    let expect = (2.0 / b(2.0)).exp() * (-2.0 / b(2.0).powf(1.3)) * b(1.0).powf(0.6) * (-1.0 / b(1.0)).exp().powi(2);
    assert_relative_eq!(n.get(2).re, expect, max_relative = 1e-12);
}

#[test]
fn tiny_data_follows_the_free_flow() {
    let u0 = SpectralField::cosine(16, 1, 1e-6).unwrap();
    let u1 = SpectralField::zeros(16);
    let p = params(16, 1e-3, 1.0);
    let traj = integrate_direct(&u0, &u1, &p).unwrap();
    for (&t, u) in traj.times.iter().zip(&traj.states) {
        let free = free_evolution(&u0, &u1, t).unwrap();
        assert!(u.l2_distance(&free).unwrap() <= 1e-10, "t = {t}");
    }
}

#[test]
fn zero_data_stays_zero() {
    let z = SpectralField::zeros(8);
    let p = params(8, 1e-3, 0.1);
    let traj = integrate_direct(&z, &z, &p).unwrap();
    assert!(traj.states.iter().all(|s| s.max_abs() == 0.0));
    let (psi, u) = integrate_decomposed(&z, &z, &p).unwrap();
    assert!(psi.states.iter().all(|s| s.max_abs() == 0.0));
    assert!(u.states.iter().all(|s| s.max_abs() == 0.0));
}

#[test]
fn direct_solver_is_fourth_order() {
    let (u0, u1) = smooth_data(32, 1.0, 0.0, 0.0);
    let run = |dt: f64| {
        let traj = integrate_direct(&u0, &u1, &params(32, dt, 0.5)).unwrap();
        traj.last().unwrap().1.clone()
    };
    let (a, b, r) = (run(0.01), run(0.005), run(0.0025));
    let e1 = a.l2_distance(&b).unwrap();
    let e2 = b.l2_distance(&r).unwrap();
    let ratio = e1 / e2;
    assert!((16.0 * 0.8..=16.0 * 1.2).contains(&ratio), "ratio {ratio} ({e1}, {e2})");
}

#[test]
fn decomposed_solver_is_fourth_order() {
    let (u0, u1) = smooth_data(16, 1.0, 0.3, -0.5);
    let run = |dt: f64| {
        let (_, u) = integrate_decomposed(&u0, &u1, &params(16, dt, 0.5)).unwrap();
        u.last().unwrap().1.clone()
    };
    let (a, b, r) = (run(0.01), run(0.005), run(0.0025));
    let ratio = a.l2_distance(&b).unwrap() / b.l2_distance(&r).unwrap();
    assert!((16.0 * 0.8..=16.0 * 1.2).contains(&ratio), "ratio {ratio}");
}

#[test]
fn zero_mode_reality_and_conjugacy() {
    let (u0, u1) = smooth_data(16, 1.0, 0.25, -0.75);
    let p = params(16, 1e-3, 0.3);
    let (traj, last) = run_direct(&u0, &u1, &p, &SolverOptions::default()).unwrap();
    for (&t, u) in traj.times.iter().zip(&traj.states) {
        let law = 0.25 - 0.75 * t;
        assert!((u.mean() - c(law, 0.0)).norm() <= 1e-12);
        assert!(u.hermitian_defect() <= 1e-12 * u.max_abs().max(1.0));
        assert!(u.is_real());
    }
    let d = last.minus.l2_distance(&last.plus.conj_reflect()).unwrap();
    assert!(d <= 1e-10 * last.plus.l2_norm(), "{d}");

    let run = integrate_decomposed_with(&u0, &u1, &p, &SolverOptions::default()).unwrap();
    let s = &run.final_state;
    let d = s.psi_minus.l2_distance(&s.psi_plus.conj_reflect()).unwrap();
    assert!(d <= 1e-10 * s.psi_plus.l2_norm(), "{d}");
    for (&t, u) in run.u.times.iter().zip(&run.u.states) {
        assert!((u.mean() - c(0.25 - 0.75 * t, 0.0)).norm() <= 1e-12);
    }
}

#[test]
fn psi_starts_at_minus_normal_form() {
    let (u0, u1) = smooth_data(12, 1.0, 0.5, 0.5);
    let p = params(12, 1e-3, 0.01);
    let run = integrate_decomposed_with(&u0, &u1, &p, &SolverOptions::default()).unwrap();
    let data = reduce_initial_data(&u0, &u1, p.alpha).unwrap();
    let dp = data.drift_params(&p);
    let hp = assemble_h(&data.f, &data.g, 0.0, Sign::Plus, &dp, true).unwrap();
    let hm = assemble_h(&data.f, &data.g, 0.0, Sign::Minus, &dp, true).unwrap();
    let psi0 = &run.psi.states[0];
    let expect = &hm - &hp;
    assert!(psi0.l2_distance(&expect).unwrap() <= 1e-14 * expect.l2_norm());
    assert!(expect.l2_norm() > 0.0);
    // u(0) = u₀, hence z(0) = 0 although Ψ(0) is not.
    let table = remainder_z(&run.u, &u0, &u1, &p, &[0.05]).unwrap();
    assert!(table.norms[0][0] <= 1e-14 * sobolev_norm(&u0, 0.05));
}

#[test]
fn solvers_agree_with_drift() {
    let (u0, u1) = smooth_data(16, 1.0, 0.4, -0.6);
    let p = params(16, 2e-4, 0.2);
    let a = integrate_direct(&u0, &u1, &p).unwrap();
    let (_, b) = integrate_decomposed(&u0, &u1, &p).unwrap();
    let (ua, ub) = (a.last().unwrap().1, b.last().unwrap().1);
    let rel = ua.l2_distance(ub).unwrap() / ua.l2_norm();
    assert!(rel <= 1e-8, "{rel}");
}

#[test]
fn coupled_drift_shifts_the_frequency() {
    // Linear waves on a constant mean m oscillate with √(n⁴ + n² - 2mn²).
    let m = 0.3;
    let mut u0 = SpectralField::cosine(8, 2, 1e-7).unwrap();
    u0.set(0, c(m, 0.0)).unwrap();
    let u1 = SpectralField::zeros(8);
    let opts = SolverOptions {
        drift: MeanDrift::Coupled,
        ..SolverOptions::default()
    };
    let p = params(8, 1e-3, 1.0);
    let traj = integrate_direct_with(&u0, &u1, &p, &opts).unwrap();
    let omega = (16.0f64 + 4.0 - 2.0 * m * 4.0).sqrt();
    for (&t, u) in traj.times.iter().zip(&traj.states) {
        let expect = 0.5e-7 * (omega * t).cos();
        assert!((u.get(2).re - expect).abs() <= 1e-12, "t = {t}");
    }
    assert!(integrate_decomposed_with(&u0, &u1, &p, &opts).is_err());
}

#[test]
fn remainder_of_linear_data_is_tiny() {
    for (m0, m1) in [(0.0, 0.0), (0.5, -0.4)] {
        let (u0, u1) = smooth_data(16, 1e-8, m0, m1);
        let p = params(16, 1e-3, 0.5);
        let traj = integrate_direct(&u0, &u1, &p).unwrap();
        let table = remainder_z(&traj, &u0, &u1, &p, &[0.0, 0.5]).unwrap();
        let scale = sobolev_norm(&u0.without_mean(), 0.5);
        for row in &table.norms {
            assert!(row.iter().all(|&z| z <= 1e-8 * scale), "{row:?}");
        }
        if m0 != 0.0 {
            // The opposite gauge leaves an O(data) remainder.
            let (&t, u) = (traj.times.last().unwrap(), traj.states.last().unwrap());
            let g = crate::spectral::gauge_phase(t, 2.0 * m0, 2.0 * m1);
            let free = free_evolution(&u0.without_mean(), &u1.without_mean(), t).unwrap();
            let wrong = apply_multiplier(
                &free,
                MultiplierId::Gauge { t, a0: 2.0 * m0, a1: 2.0 * m1, sign: Sign::Minus },
            )
            .unwrap();
            let z = &u.without_mean() - &wrong;
            assert!(g != 0.0 && sobolev_norm(&z, 0.0) > 1e-3 * sobolev_norm(&u0.without_mean(), 0.0));
        }
    }
}

#[test]
fn mean_free_remainder_uses_plain_free_flow() {
    let (u0, u1) = smooth_data(12, 1.0, 0.0, 0.0);
    let p = params(12, 1e-3, 0.2);
    for t in [0.0, 0.1, 0.2] {
        let a = free_part(&u0, &u1, t, &p).unwrap();
        let b = free_evolution(&u0, &u1, t).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn mismatched_truncation_is_rejected() {
    let u = SpectralField::zeros(8);
    assert!(matches!(
        integrate_direct(&u, &u, &params(16, 1e-3, 0.1)),
        Err(Error::TruncationMismatch { .. })
    ));
}

#[test]
fn norm_guard_trips_on_blow_up() {
    // Large smooth data blows up quickly for the focusing sign of the mean drift.
    let u0 = SpectralField::cosine(8, 1, 400.0).unwrap();
    let u1 = SpectralField::zeros(8);
    let r = integrate_direct(&u0, &u1, &params(8, 1e-3, 5.0));
    assert!(matches!(r, Err(Error::Instability { .. })), "{r:?}");
}
