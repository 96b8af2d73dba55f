use super::decomposed::gauge_up;
use super::direct::integrate_direct_with;
use super::trajectory::{SolverOptions, Trajectory};
use super::{reduce_initial_data, MeanDrift};
use crate::error::{invalid, Error, Result};
use crate::fit::{fit_loglog, LogLogFit};
use crate::params::ModelParams;
use crate::spectral::{
    dispersion, free_evolution, random_sobolev_field, sobolev_norm, SpectralField,
};

/// Gauged free part `e^{g𝒫}[cos(tL)(u₀ - m₀) + sin(tL)L^{-1}(u₁ - m₁)]`
/// with `g = A₀t + A₁t²/2`, `A₀ = 2m₀`, `A₁ = 2m₁`.
pub fn free_part(
    u0: &SpectralField,
    u1: &SpectralField,
    t: f64,
    params: &ModelParams,
) -> Result<SpectralField> {
    let data = reduce_initial_data(u0, u1, params.alpha)?;
    let p = data.drift_params(params);
    let free = free_evolution(&u0.without_mean(), &u1.without_mean(), t)?;
    gauge_up(t, &p, &free)
}

/// `‖z(t)‖_{H^β}` for every recorded time and requested `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderTable {
    pub times: Vec<f64>,
    pub betas: Vec<f64>,
    /// `norms[i][j] = ‖z(times[i])‖_{H^{betas[j]}}`
    pub norms: Vec<Vec<f64>>,
    /// Same layout for the gauged free part.
    pub free_norms: Vec<Vec<f64>>,
}

impl RemainderTable {
    /// `sup_t ‖z(t)‖_{H^{β_j}}`
    pub fn sup(&self, j: usize) -> f64 {
        self.norms.iter().map(|r| r[j]).fold(0.0, f64::max)
    }

    pub fn free_sup(&self, j: usize) -> f64 {
        self.free_norms.iter().map(|r| r[j]).fold(0.0, f64::max)
    }
}

/// Remainder `z(t) = u(t) - m(t) - e^{g𝒫}[cos(tL)(u₀ - m₀) + sin(tL)L^{-1}(u₁ - m₁)]`
/// where `m(t) = m₀ + t m₁` is the exact mean.
pub fn remainder_z(
    traj: &Trajectory,
    u0: &SpectralField,
    u1: &SpectralField,
    params: &ModelParams,
    betas: &[f64],
) -> Result<RemainderTable> {
    let data = reduce_initial_data(u0, u1, params.alpha)?;
    let mut table = RemainderTable {
        times: traj.times.clone(),
        betas: betas.to_vec(),
        norms: Vec::with_capacity(traj.len()),
        free_norms: Vec::with_capacity(traj.len()),
    };
    for (&t, u) in traj.times.iter().zip(&traj.states) {
        let free = free_part(u0, u1, t, params)?;
        let mut z = u.without_mean();
        z.axpy(num_complex::Complex64::new(-1.0, 0.0), &free)?;
        let mean_defect = u.mean().re - data.mean_at(t);
        z.set(0, num_complex::Complex64::new(mean_defect, u.mean().im))?;
        table.norms.push(betas.iter().map(|&b| sobolev_norm(&z, b)).collect());
        table
            .free_norms
            .push(betas.iter().map(|&b| sobolev_norm(&free, b)).collect());
    }
    Ok(table)
}

/// Time step used by the smoothing scan at truncation `n`:
/// `min(dt, SCAN_CFL / μ_N)`.
pub const SCAN_CFL: f64 = 0.5;

/// Slope above which a sup-norm sequence counts as growing.
pub const GROWTH_THRESHOLD: f64 = 0.1;

/// One truncation of the smoothing scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingCell {
    pub trunc: usize,
    pub dt: f64,
    pub betas: Vec<f64>,
    /// `sup_t ‖z‖_{H^β}` per `β`
    pub z_sup: Vec<f64>,
    /// `sup_t ‖free part‖_{H^β}` per `β`
    pub free_sup: Vec<f64>,
}

/// Growth exponents for one `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingRow {
    pub beta: f64,
    pub z_fit: LogLogFit,
    pub free_fit: LogLogFit,
    /// `z_fit.slope ≤ GROWTH_THRESHOLD`
    pub z_bounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingReport {
    pub cells: Vec<SmoothingCell>,
    pub rows: Vec<SmoothingRow>,
}

/// Data of the smoothing scan: `u₀ ∈ H^{-α}` from `seed` and
/// `u₁ ∈ H^{-α-2}` from `seed + 1`.
pub fn scan_data(alpha: f64, trunc: usize, seed: u64) -> (SpectralField, SpectralField) {
    (
        random_sobolev_field(-alpha, trunc, seed),
        random_sobolev_field(-alpha - 2.0, trunc, seed.wrapping_add(1)),
    )
}

/// Integrates the scan data at one truncation and measures the sup norms.
pub fn smoothing_cell(
    params: &ModelParams,
    trunc: usize,
    betas: &[f64],
    seed: u64,
) -> Result<SmoothingCell> {
    let p = ModelParams {
        trunc,
        dt: params.dt.min(SCAN_CFL / dispersion(trunc as i64)),
        ..*params
    };
    let (u0, u1) = scan_data(p.alpha, trunc, seed);
    let options = SolverOptions {
        outputs: 50,
        norm_orders: Vec::new(),
        drift: MeanDrift::Reduced,
    };
    let traj = integrate_direct_with(&u0, &u1, &p, &options)?;
    let table = remainder_z(&traj, &u0, &u1, &p, betas)?;
    Ok(SmoothingCell {
        trunc,
        dt: p.dt,
        betas: betas.to_vec(),
        z_sup: (0..betas.len()).map(|j| table.sup(j)).collect(),
        free_sup: (0..betas.len()).map(|j| table.free_sup(j)).collect(),
    })
}

impl SmoothingReport {
    /// Fits growth exponents across the cells (at least three truncations).
    pub fn from_cells(cells: Vec<SmoothingCell>) -> Result<Self> {
        if cells.len() < 3 {
            return Err(Error::TooFewPoints {
                needed: 3,
                got: cells.len(),
            });
        }
        let betas = cells[0].betas.clone();
        let xs: Vec<f64> = cells.iter().map(|c| c.trunc as f64).collect();
        let mut rows = Vec::with_capacity(betas.len());
        for (j, &beta) in betas.iter().enumerate() {
            let zs: Vec<f64> = cells.iter().map(|c| c.z_sup[j]).collect();
            let fs: Vec<f64> = cells.iter().map(|c| c.free_sup[j]).collect();
            let z_fit = fit_loglog(&xs, &zs)?;
            rows.push(SmoothingRow {
                beta,
                z_bounded: z_fit.slope <= GROWTH_THRESHOLD,
                z_fit,
                free_fit: fit_loglog(&xs, &fs)?,
            });
        }
        Ok(Self { cells, rows })
    }
}

/// Runs [`smoothing_cell`] for every truncation in order and fits slopes.
pub fn smoothing_scan(
    params: &ModelParams,
    n_list: &[usize],
    betas: &[f64],
    seed: u64,
) -> Result<SmoothingReport> {
    smoothing_scan_with(params, n_list, betas, seed, |f| n_list.iter().map(|&n| f(n)).collect())
}

/// Like [`smoothing_scan`] with a caller supplied map over truncations
/// (for instance a parallel one). `map` must return the cells in the order
/// of `n_list`.
pub fn smoothing_scan_with<M>(
    params: &ModelParams,
    n_list: &[usize],
    betas: &[f64],
    seed: u64,
    map: M,
) -> Result<SmoothingReport>
where
    M: FnOnce(&(dyn Fn(usize) -> Result<SmoothingCell> + Sync)) -> Vec<Result<SmoothingCell>>,
{
    params.validate()?;
    if !(params.alpha > 0.0 && params.alpha < 0.375) {
        return Err(invalid("alpha", format!("smoothing scan needs 0 < alpha < 3/8, got {}", params.alpha)));
    }
    if betas.is_empty() {
        return Err(invalid("beta", "need at least one beta"));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("n", "truncations must increase"));
    }
    let cell = |n: usize| smoothing_cell(params, n, betas, seed);
    let cells = map(&cell).into_iter().collect::<Result<Vec<_>>>()?;
    SmoothingReport::from_cells(cells)
}
