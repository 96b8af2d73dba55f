use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use goodbsq_core::dynamics::{
    integrate_decomposed_with, integrate_direct_with, remainder_z, scan_data, smoothing_scan_with,
    SolverOptions, Trajectory,
};
use goodbsq_core::estimates::{
    counterexample_scan, default_grid, region_map_with, scan_m_with, test_t_boundedness_with,
    LatticeScanConfig, MKind, Verdict,
};
use goodbsq_core::{ModelParams, SpectralField};

use crate::config::{CommandKind, DataKind, RunConfig};
use crate::error::CliError;
use crate::output::{tuple, Artifacts, Cell, Table};

/// Margin around the analytic boundary inside which region cells are not judged.
const REGION_MARGIN: f64 = 0.05;
/// Largest cross-`N` slope of the T ratio still read as bounded.
const T_SLOPE_TOLERANCE: f64 = 0.05;

pub fn run(config: &RunConfig) -> Result<Artifacts, CliError> {
    match config.command {
        CommandKind::Simulate => simulate(config),
        CommandKind::Decompose => decompose(config),
        CommandKind::SmoothingScan => smoothing(config),
        CommandKind::SymbolScan if config.region => region(config),
        CommandKind::SymbolScan => symbol(config),
        CommandKind::Counterexample => counterexample(config),
        CommandKind::TBound => t_bound(config),
    }
}

/// Real data on modes 1..=5 with geometric decay.
fn smooth_data(trunc: usize, mean0: f64, mean1: f64) -> Result<(SpectralField, SpectralField), CliError> {
    let mk = |phase: f64, scale: f64, mean: f64| {
        let half: Vec<Complex64> = (0..=trunc)
            .map(|k| match k {
                0 => Complex64::new(mean, 0.0),
                1..=5 => Complex64::from_polar(scale * 0.5f64.powi(k as i32), phase * k as f64),
                _ => Complex64::new(0.0, 0.0),
            })
            .collect();
        SpectralField::real_from_half(trunc, &half)
    };
    Ok((mk(0.7, 1.0, mean0)?, mk(-1.1, 0.8, mean1)?))
}

fn initial_data(config: &RunConfig) -> Result<(SpectralField, SpectralField), CliError> {
    let trunc = config.trunc();
    match config.data {
        DataKind::Smooth => smooth_data(trunc, config.mean0, config.mean1),
        DataKind::Rough => {
            let (mut u0, mut u1) = scan_data(config.alpha, trunc, config.seed);
            u0.set(0, Complex64::new(config.mean0, 0.0))?;
            u1.set(0, Complex64::new(config.mean1, 0.0))?;
            Ok((u0, u1))
        }
    }
}

fn norm_orders(config: &RunConfig) -> Vec<f64> {
    vec![-config.alpha, 0.0, config.gamma - config.alpha]
}

fn norm_table(name: &'static str, traj: &Trajectory) -> Table {
    let mut t = Table::new(name, &["t", "s", "norm"]);
    for (time, row) in traj.times.iter().zip(&traj.norms) {
        for (s, v) in traj.norm_orders.iter().zip(row) {
            t.push(vec![(*time).into(), (*s).into(), (*v).into()]);
        }
    }
    t
}

fn final_norms(traj: &Trajectory) -> String {
    let row = traj.norms.last().map(Vec::as_slice).unwrap_or(&[]);
    traj.norm_orders
        .iter()
        .zip(row)
        .map(|(s, v)| format!("H^{s:.4}: {v:.6e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn simulate(config: &RunConfig) -> Result<Artifacts, CliError> {
    let params = config.params()?;
    let (u0, u1) = initial_data(config)?;
    let options = SolverOptions {
        norm_orders: norm_orders(config),
        drift: config.mean_drift(),
        ..SolverOptions::default()
    };
    let traj = integrate_direct_with(&u0, &u1, &params, &options)?;

    let mut zero = Table::new("zero_mode", &["t", "mean_re", "mean_im", "expected"]);
    let mut defect = 0.0f64;
    for (&t, m) in traj.times.iter().zip(&traj.zero_mode) {
        let expected = config.mean0 + t * config.mean1;
        defect = defect.max((m.re - expected).abs()).max(m.im.abs());
        zero.push(vec![t.into(), m.re.into(), m.im.into(), expected.into()]);
    }
    let (t_end, last) = traj.last().expect("trajectory records t = 0");
    let mut out = Artifacts {
        tables: vec![norm_table("norms", &traj), zero],
        blobs: vec![("final_state.bin".into(), last.to_bytes())],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("simulate: N = {}, dt = {:.6e}, T = {}", config.trunc(), config.dt, config.horizon),
        format!("final norms at t = {t_end}: {}", final_norms(&traj)),
        format!("zero-mode defect: {defect:.3e}"),
    ];
    out.facts.insert("zero_mode_defect".into(), json!(defect));
    Ok(out)
}

fn decompose(config: &RunConfig) -> Result<Artifacts, CliError> {
    let params = config.params()?;
    let (u0, u1) = initial_data(config)?;
    let options = SolverOptions {
        norm_orders: norm_orders(config),
        ..SolverOptions::default()
    };
    let run = integrate_decomposed_with(&u0, &u1, &params, &options)?;
    let direct = integrate_direct_with(&u0, &u1, &params, &options)?;
    let mut rel = 0.0f64;
    for (a, b) in run.u.states.iter().zip(&direct.states) {
        let scale = b.l2_norm().max(f64::MIN_POSITIVE);
        rel = rel.max(a.l2_distance(b)? / scale);
    }

    let table = remainder_z(&run.u, &u0, &u1, &params, &config.betas)?;
    let mut rem = Table::new("remainder", &["t", "beta", "z", "free"]);
    for (i, &t) in table.times.iter().enumerate() {
        for (j, &b) in table.betas.iter().enumerate() {
            rem.push(vec![t.into(), b.into(), table.norms[i][j].into(), table.free_norms[i][j].into()]);
        }
    }
    let mut out = Artifacts {
        tables: vec![norm_table("norms", &run.u), norm_table("psi_norms", &run.psi), rem],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("decompose: N = {}, dt = {:.6e}, T = {}", config.trunc(), config.dt, config.horizon),
        format!("final norms of u: {}", final_norms(&run.u)),
        format!("final norms of psi: {}", final_norms(&run.psi)),
        format!("max relative l2 difference to the direct solver: {rel:.3e}"),
    ];
    for (j, b) in table.betas.iter().enumerate() {
        out.summary.push(format!(
            "beta = {b}: sup_t |z|_H^beta = {:.6e}, sup_t |free|_H^beta = {:.6e}",
            table.sup(j),
            table.free_sup(j)
        ));
    }
    out.facts.insert("direct_rel_diff".into(), json!(rel));
    Ok(out)
}

fn n_usize(config: &RunConfig) -> Vec<usize> {
    config.n_list.iter().map(|&n| n as usize).collect()
}

fn smoothing(config: &RunConfig) -> Result<Artifacts, CliError> {
    let params = ModelParams {
        beta: config.betas[0],
        ..config.params()?
    };
    let ns = n_usize(config);
    let report = smoothing_scan_with(&params, &ns, &config.betas, config.seed, |f| {
        ns.par_iter().map(|&n| f(n)).collect()
    })?;
    let mut cells = Table::new("cells", &["n", "dt", "beta", "z_sup", "free_sup"]);
    for c in &report.cells {
        for (j, &b) in c.betas.iter().enumerate() {
            cells.push(vec![c.trunc.into(), c.dt.into(), b.into(), c.z_sup[j].into(), c.free_sup[j].into()]);
        }
    }
    let mut slopes = Table::new(
        "slopes",
        &["beta", "z_slope", "z_halfwidth", "free_slope", "free_halfwidth", "z_bounded"],
    );
    let mut out = Artifacts::default();
    out.summary.push(format!("smoothing-scan: alpha = {}, N = {:?}", config.alpha, config.n_list));
    for r in &report.rows {
        slopes.push(vec![
            r.beta.into(),
            r.z_fit.slope.into(),
            r.z_fit.slope_halfwidth.into(),
            r.free_fit.slope.into(),
            r.free_fit.slope_halfwidth.into(),
            r.z_bounded.into(),
        ]);
        out.summary.push(format!(
            "beta = {}: z slope {:.3}, free slope {:.3}, z {}",
            r.beta,
            r.z_fit.slope,
            r.free_fit.slope,
            if r.z_bounded { "bounded" } else { "growing" }
        ));
    }
    out.facts.insert(
        "z_slopes".into(),
        json!(report.rows.iter().map(|r| r.z_fit.slope).collect::<Vec<_>>()),
    );
    out.tables = vec![cells, slopes];
    Ok(out)
}

fn scan_config(config: &RunConfig) -> Result<LatticeScanConfig, CliError> {
    Ok(LatticeScanConfig {
        delta: config.delta,
        eps1: config.sign("eps1")?,
        eps2: config.sign("eps2")?,
        eps3: config.sign("eps3")?,
        ..LatticeScanConfig::new(MKind::parse(&config.kind)?, config.alpha, config.gamma, n_usize(config))
    })
}

fn signs(s: &[goodbsq_core::Sign]) -> String {
    s.iter().map(ToString::to_string).collect()
}

fn symbol(config: &RunConfig) -> Result<Artifacts, CliError> {
    let sc = scan_config(config)?;
    let report = scan_m_with(&sc, |tasks, f| (0..tasks).into_par_iter().map(f).collect())?;
    let mut rows = Table::new(
        "rows",
        &[
            "kind", "alpha", "gamma", "delta", "cutoff", "sup", "argmax", "argmax_signs", "shell_sup",
            "shell_argmax", "shell_argmax_signs",
        ],
    );
    for r in &report.rows {
        rows.push(vec![
            sc.kind.to_string().into(),
            sc.alpha.into(),
            sc.gamma.into(),
            sc.delta.into(),
            r.cutoff.into(),
            r.sup.into(),
            tuple(&r.argmax).into(),
            signs(&r.argmax_signs).into(),
            r.shell_sup.into(),
            tuple(&r.shell_argmax).into(),
            signs(&r.shell_argmax_signs).into(),
        ]);
    }
    let mut fit = Table::new("fit", &["series", "slope", "halfwidth", "points"]);
    for (name, f) in [("shell", &report.fit), ("cumulative", &report.cumulative_fit)] {
        fit.push(vec![name.into(), f.slope.into(), f.slope_halfwidth.into(), f.points.into()]);
    }
    let last = report.rows.last().expect("at least three cutoffs");
    let mut out = Artifacts {
        tables: vec![rows, fit],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("symbol-scan {}: alpha = {}, gamma = {}, delta = {}", sc.kind, sc.alpha, sc.gamma, sc.delta),
        format!(
            "shell slope {:.4} (cumulative {:.4}): {}",
            report.fit.slope, report.cumulative_fit.slope, report.verdict
        ),
        format!("argmax at cutoff {}: ({})", last.cutoff, tuple(&last.argmax).replace(';', ", ")),
    ];
    out.facts.insert("slope".into(), json!(report.fit.slope));
    out.facts.insert("verdict".into(), json!(report.verdict.to_string()));
    Ok(out)
}

fn region(config: &RunConfig) -> Result<Artifacts, CliError> {
    let kind = MKind::parse(&config.kind)?;
    let grid = default_grid();
    let cells = region_map_with(
        kind,
        &grid,
        &grid,
        &n_usize(config),
        config.delta,
        REGION_MARGIN,
        |points, f| points.par_iter().map(|&(a, g)| f(a, g)).collect(),
    )?;
    let mut table = Table::new("region", &["kind", "alpha", "gamma", "slope", "verdict", "expected", "agrees"]);
    let mut mismatches = 0;
    for c in &cells {
        if !c.agrees() {
            mismatches += 1;
        }
        table.push(vec![
            kind.to_string().into(),
            c.alpha.into(),
            c.gamma.into(),
            c.slope.into(),
            c.verdict.to_string().into(),
            c.expected.map_or("boundary".to_string(), |v| v.to_string()).into(),
            c.agrees().into(),
        ]);
    }
    let judged = cells.iter().filter(|c| c.expected.is_some()).count();
    let growing = cells.iter().filter(|c| c.verdict == Verdict::Growing).count();
    let mut out = Artifacts {
        tables: vec![table],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("region map {kind}: {} cells, cutoffs {:?}, margin {REGION_MARGIN}", cells.len(), config.n_list),
        format!("{growing} growing, {judged} judged, {mismatches} mismatches"),
    ];
    out.facts.insert("mismatches".into(), json!(mismatches));
    Ok(out)
}

fn counterexample(config: &RunConfig) -> Result<Artifacts, CliError> {
    let report = counterexample_scan(config.alpha, config.gamma, &config.n_list)?;
    let mut table = Table::new("counterexample", &["N", "C", "C_exact"]);
    for ((&n, &c), &e) in report.ns.iter().zip(&report.values).zip(&report.exact_values) {
        table.push(vec![n.into(), c.into(), e.into()]);
    }
    let mut out = Artifacts {
        tables: vec![table],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("counterexample: alpha = {}, gamma = {}", config.alpha, config.gamma),
        format!("fitted slope {:.2} vs theory {:.2}", report.fit.slope, report.theory),
        format!("exact-frequency slope {:.4}", report.exact_fit.slope),
    ];
    out.facts.insert("slope".into(), json!(report.fit.slope));
    out.facts.insert("theory".into(), json!(report.theory));
    Ok(out)
}

fn t_bound(config: &RunConfig) -> Result<Artifacts, CliError> {
    let ns = n_usize(config);
    let report = test_t_boundedness_with(config.alpha, config.trials, &ns, config.seed, |f| {
        ns.par_iter().map(|&n| f(n)).collect()
    })?;
    let mut rows = Table::new(
        "rows",
        &[
            "n", "eps1", "eps2", "random_max", "random_median", "adversarial_max", "adversarial_argmax",
            "scaling_max",
        ],
    );
    for r in &report.rows {
        rows.push(vec![
            r.trunc.into(),
            r.eps1.to_string().into(),
            r.eps2.to_string().into(),
            r.random_max.into(),
            r.random_median.into(),
            r.adversarial_max.into(),
            Cell::Text(r.adversarial_argmax.clone()),
            r.scaling_max.into(),
        ]);
    }
    let mut maxima = Table::new("maxima", &["n", "max", "scaling_max"]);
    for ((&n, &m), &s) in ns.iter().zip(&report.max_per_n).zip(&report.scaling_max_per_n) {
        maxima.push(vec![n.into(), m.into(), s.into()]);
    }
    let bounded = report.fit.slope.abs() <= T_SLOPE_TOLERANCE;
    let mut out = Artifacts {
        tables: vec![rows, maxima],
        ..Artifacts::default()
    };
    out.summary = vec![
        format!("t-bound: alpha = {}, {} trials, N = {:?}", config.alpha, config.trials, config.n_list),
        format!(
            "max ratio slope {:.4}, scaling inputs slope {:.4}: {}",
            report.fit.slope,
            report.scaling_fit.slope,
            if bounded { "bounded" } else { "growing" }
        ),
    ];
    out.facts.insert("slope".into(), json!(report.fit.slope));
    out.facts.insert("scaling_slope".into(), json!(report.scaling_fit.slope));
    Ok(out)
}
