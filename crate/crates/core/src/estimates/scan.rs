use std::cmp::Ordering;
use std::fmt;

use super::resonance::{factored, QuadCase};
use crate::error::{invalid, Error, Result};
use crate::fit::{fit_loglog, LogLogFit};
use crate::spectral::{bracket, Sign};

/// Slope above which a scan is declared [`Verdict::Growing`].
pub const SYMBOL_GROWTH_THRESHOLD: f64 = 0.025;

/// Which multiplier supremum to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MKind {
    /// `⟨ξ₁⟩^{α-γ}⟨ξ₂⟩^α / (⟨ξ⟩^{α-γ} L_max^{1/2-δ})` on `ξ = ξ₁ + ξ₂`.
    M1,
    /// `⟨ξ₁⟩^{α-1}⟨ξ₂⟩^{α-1/2+δ} / ⟨ξ⟩^{α-γ}`.
    M2,
    /// `⟨ξ₁⟩^α⟨ξ₃⟩^α⟨ξ₄⟩^{γ-α}N^{3δ} / (⟨ξ₁+ξ₂⟩⟨ξ₂⟩^{1-α}L_max^{1/2-δ})`,
    /// signs `(+, -, ε₃)`.
    M3,
    /// `⟨ξ₃⟩^α⟨ξ₄⟩^{γ-α}N^{3δ} / (⟨ξ₁⟩^{1-α}⟨ξ₂⟩^{1-α}L_max^{1/2-δ})`,
    /// signs `(+, +, ε₃)`.
    M4,
}

impl MKind {
    pub fn is_trilinear(self) -> bool {
        matches!(self, MKind::M3 | MKind::M4)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "M1" => Ok(MKind::M1),
            "M2" => Ok(MKind::M2),
            "M3" => Ok(MKind::M3),
            "M4" => Ok(MKind::M4),
            _ => Err(invalid("kind", format!("expected M1..M4, got {s:?}"))),
        }
    }
}

impl fmt::Display for MKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Bounded,
    Growing,
}

impl Verdict {
    pub fn from_slope(slope: f64) -> Self {
        if slope > SYMBOL_GROWTH_THRESHOLD {
            Verdict::Growing
        } else {
            Verdict::Bounded
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
        })
    }
}

/// A lattice scan request. Signs left as `None` are maximised over.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeScanConfig {
    pub kind: MKind,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub cutoffs: Vec<usize>,
    /// Only used by M1.
    pub eps1: Option<Sign>,
    /// Only used by M1.
    pub eps2: Option<Sign>,
    /// Only used by M3 and M4.
    pub eps3: Option<Sign>,
}

impl LatticeScanConfig {
    /// Worst case over all signs, `δ = 0.01`.
    pub fn new(kind: MKind, alpha: f64, gamma: f64, cutoffs: Vec<usize>) -> Self {
        Self {
            kind,
            alpha,
            gamma,
            delta: 0.01,
            cutoffs,
            eps1: None,
            eps2: None,
            eps3: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 0.1) {
            return Err(invalid("delta", format!("must lie in (0, 0.1], got {}", self.delta)));
        }
        if !self.alpha.is_finite() || !self.gamma.is_finite() {
            return Err(invalid("alpha", "alpha and gamma must be finite"));
        }
        if self.cutoffs.is_empty() || self.cutoffs[0] < 2 {
            return Err(invalid("n", "need cutoffs of at least 2"));
        }
        if self.cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("n", "cutoffs must increase"));
        }
        let cap = if self.kind.is_trilinear() { 512 } else { 1 << 13 };
        if *self.cutoffs.last().unwrap() > cap {
            return Err(invalid("n", format!("{} scans are capped at cutoff {cap}", self.kind)));
        }
        Ok(())
    }

    fn sign_pairs(&self) -> Vec<(Sign, Sign)> {
        let e1 = self.eps1.map_or(Sign::BOTH.to_vec(), |s| vec![s]);
        let e2 = self.eps2.map_or(Sign::BOTH.to_vec(), |s| vec![s]);
        e1.iter().flat_map(|&a| e2.iter().map(move |&b| (a, b))).collect()
    }

    fn eps3_list(&self) -> Vec<Sign> {
        self.eps3.map_or(Sign::BOTH.to_vec(), |s| vec![s])
    }
}

/// Largest value seen so far together with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Best {
    value: f64,
    tuple: [i64; 4],
    /// Position of the sign choice in the enumeration order.
    sign_slot: u8,
}

impl Best {
    const NONE: Best = Best {
        value: f64::NEG_INFINITY,
        tuple: [0; 4],
        sign_slot: 0,
    };

    /// Larger value wins, ties go to the lexicographically smaller key.
    fn beats(&self, other: &Best) -> bool {
        match self.value.partial_cmp(&other.value) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => (self.tuple, self.sign_slot) < (other.tuple, other.sign_slot),
            _ => false,
        }
    }

    fn merge(&mut self, other: &Best) {
        if other.beats(self) {
            *self = *other;
        }
    }
}

/// Maxima of one slice of the outer frequency loop, bucketed by
/// `max|ξ_i|`. Produced by the task closure of [`scan_m_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPartial {
    levels: Vec<Best>,
}

/// Supremum up to one cutoff `c` and over the dyadic shell
/// `c/2 < max|ξ_i| ≤ c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSup {
    pub cutoff: usize,
    pub sup: f64,
    /// `(ξ₁, ξ₂)` for bilinear kinds, `(ξ₁, ξ₂, ξ₃, ξ₄)` for trilinear ones.
    pub argmax: Vec<i64>,
    /// `(ε₁, ε₂)` or `(ε₁, ε₂, ε₃)` at the argmax; empty for M2.
    pub argmax_signs: Vec<Sign>,
    pub shell_sup: f64,
    pub shell_argmax: Vec<i64>,
    pub shell_argmax_signs: Vec<Sign>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolScanReport {
    pub config: LatticeScanConfig,
    pub rows: Vec<CutoffSup>,
    /// Growth exponent of the shell suprema. The verdict is read off this
    /// fit: the cumulative supremum is dominated by low frequencies at
    /// small cutoffs and hides slow growth.
    pub fit: LogLogFit,
    /// Growth exponent of the cumulative suprema.
    pub cumulative_fit: LogLogFit,
    pub verdict: Verdict,
}

/// Power tables indexed by `|n|` and the modulation weight.
struct Tables {
    alpha: f64,
    gamma: f64,
    delta: f64,
    /// `max(1, L)^{1/2-δ}` for `L = 0..`
    lmax: Vec<f64>,
}

impl Tables {
    fn new(config: &LatticeScanConfig, max_res: usize) -> Self {
        let e = 0.5 - config.delta;
        Self {
            alpha: config.alpha,
            gamma: config.gamma,
            delta: config.delta,
            lmax: (0..=max_res).map(|l| (l.max(1) as f64).powf(e)).collect(),
        }
    }

    /// `⟨n⟩^p` for `n = 0..=m`.
    fn pow(m: usize, p: f64) -> Vec<f64> {
        (0..=m).map(|n| bracket(n as i64).powf(p)).collect()
    }
}

#[inline]
fn ix(n: i64) -> usize {
    n.unsigned_abs() as usize
}

/// Runs a lattice scan sequentially.
pub fn scan_m(config: &LatticeScanConfig) -> Result<SymbolScanReport> {
    scan_m_with(config, |tasks, f| (0..tasks).map(f).collect())
}

/// Like [`scan_m`] with a caller supplied map over the outer loop. `map`
/// receives the number of tasks and the task closure and must return the
/// partials in task order; the reduction is then deterministic.
pub fn scan_m_with<M>(config: &LatticeScanConfig, map: M) -> Result<SymbolScanReport>
where
    M: FnOnce(usize, &(dyn Fn(usize) -> ScanPartial + Sync)) -> Vec<ScanPartial>,
{
    config.validate()?;
    if config.cutoffs.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: config.cutoffs.len(),
        });
    }
    let c = *config.cutoffs.last().unwrap() as i64;
    let tasks = (2 * c + 1) as usize;
    let partials = match config.kind {
        MKind::M1 => {
            let k = M1Kernel::new(config);
            map(tasks, &|i| k.run(i as i64 - c))
        }
        MKind::M2 => {
            let k = M2Kernel::new(config);
            map(tasks, &|i| k.run(i as i64 - c))
        }
        MKind::M3 | MKind::M4 => {
            let k = TriKernel::new(config);
            map(tasks, &|i| k.run(i as i64 - c))
        }
    };
    if partials.len() != tasks {
        return Err(Error::Malformed(format!(
            "scan map returned {} partials for {tasks} tasks",
            partials.len()
        )));
    }
    report(config, &partials)
}

fn report(config: &LatticeScanConfig, partials: &[ScanPartial]) -> Result<SymbolScanReport> {
    let cmax = *config.cutoffs.last().unwrap();
    let mut by_max = vec![Best::NONE; cmax + 1];
    for p in partials {
        for (slot, b) in by_max.iter_mut().zip(&p.levels) {
            slot.merge(b);
        }
    }
    let pairs = config.sign_pairs();
    let eps3 = config.eps3_list();
    let describe = |b: &Best| -> (Vec<i64>, Vec<Sign>) {
        match config.kind {
            MKind::M1 => {
                let (e1, e2) = pairs[b.sign_slot as usize];
                (b.tuple[..2].to_vec(), vec![e1, e2])
            }
            MKind::M2 => (b.tuple[..2].to_vec(), Vec::new()),
            MKind::M3 | MKind::M4 => {
                let (e1, e2) = tri_case(config.kind).signs();
                (b.tuple.to_vec(), vec![e1, e2, eps3[b.sign_slot as usize]])
            }
        }
    };
    let best_of = |lo: usize, hi: usize| {
        let mut best = Best::NONE;
        for b in &by_max[lo..=hi] {
            best.merge(b);
        }
        best
    };
    let mut rows = Vec::with_capacity(config.cutoffs.len());
    for &cutoff in &config.cutoffs {
        let all = best_of(0, cutoff);
        let shell = best_of(cutoff / 2 + 1, cutoff);
        if shell.value == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("no admissible tuple near cutoff {cutoff}")));
        }
        let (argmax, argmax_signs) = describe(&all);
        let (shell_argmax, shell_argmax_signs) = describe(&shell);
        rows.push(CutoffSup {
            cutoff,
            sup: all.value,
            argmax,
            argmax_signs,
            shell_sup: shell.value,
            shell_argmax,
            shell_argmax_signs,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.cutoff as f64).collect();
    let shell: Vec<f64> = rows.iter().map(|r| r.shell_sup).collect();
    let all: Vec<f64> = rows.iter().map(|r| r.sup).collect();
    let fit = fit_loglog(&xs, &shell)?;
    Ok(SymbolScanReport {
        config: config.clone(),
        rows,
        verdict: Verdict::from_slope(fit.slope),
        fit,
        cumulative_fit: fit_loglog(&xs, &all)?,
    })
}

fn tri_case(kind: MKind) -> QuadCase {
    if kind == MKind::M3 {
        QuadCase::Pm
    } else {
        QuadCase::Pp
    }
}

struct M1Kernel {
    c: i64,
    t: Tables,
    num1: Vec<f64>,
    num2: Vec<f64>,
    den: Vec<f64>,
    pairs: Vec<(i64, i64)>,
}

impl M1Kernel {
    fn new(config: &LatticeScanConfig) -> Self {
        let c = *config.cutoffs.last().unwrap();
        let t = Tables::new(config, 3 * c * c);
        let ag = t.alpha - t.gamma;
        Self {
            c: c as i64,
            num1: Tables::pow(c, ag),
            num2: Tables::pow(c, t.alpha),
            den: Tables::pow(c, ag),
            pairs: config
                .sign_pairs()
                .into_iter()
                .map(|(a, b)| (a.int(), b.int()))
                .collect(),
            t,
        }
    }

    fn run(&self, x1: i64) -> ScanPartial {
        let mut levels = vec![Best::NONE; self.c as usize + 1];
        if x1 == 0 {
            return ScanPartial { levels };
        }
        let c = self.c;
        for x2 in (-c).max(-c - x1)..=c.min(c - x1) {
            let x = x1 + x2;
            if x2 == 0 || x == 0 {
                continue;
            }
            let n = x1.abs().max(x2.abs()).max(x.abs());
            let base = self.num1[ix(x1)] * self.num2[ix(x2)] / self.den[ix(x)];
            let lv = &mut levels[n as usize];
            for (slot, &(e1, e2)) in self.pairs.iter().enumerate() {
                let res = x * x - e1 * x1 * x1 - e2 * x2 * x2;
                let v = base / self.t.lmax[ix(res)];
                if v > lv.value {
                    *lv = Best {
                        value: v,
                        tuple: [x1, x2, 0, 0],
                        sign_slot: slot as u8,
                    };
                }
            }
        }
        ScanPartial { levels }
    }
}

struct M2Kernel {
    c: i64,
    num1: Vec<f64>,
    num2: Vec<f64>,
    den: Vec<f64>,
}

impl M2Kernel {
    fn new(config: &LatticeScanConfig) -> Self {
        let c = *config.cutoffs.last().unwrap();
        let t = Tables::new(config, 0);
        Self {
            c: c as i64,
            num1: Tables::pow(c, t.alpha - 1.0),
            num2: Tables::pow(c, t.alpha - 0.5 + t.delta),
            den: Tables::pow(c, t.alpha - t.gamma),
        }
    }

    fn run(&self, x1: i64) -> ScanPartial {
        let mut levels = vec![Best::NONE; self.c as usize + 1];
        if x1 == 0 {
            return ScanPartial { levels };
        }
        let c = self.c;
        for x2 in (-c).max(-c - x1)..=c.min(c - x1) {
            let x = x1 + x2;
            if x2 == 0 || x == 0 {
                continue;
            }
            let n = x1.abs().max(x2.abs()).max(x.abs());
            let v = self.num1[ix(x1)] * self.num2[ix(x2)] / self.den[ix(x)];
            let lv = &mut levels[n as usize];
            if v > lv.value {
                *lv = Best {
                    value: v,
                    tuple: [x1, x2, 0, 0],
                    sign_slot: 0,
                };
            }
        }
        ScanPartial { levels }
    }
}

struct TriKernel {
    c: i64,
    case: QuadCase,
    t: Tables,
    eps3: Vec<Sign>,
    /// Factors of `ξ₁`, `ξ₂`, `ξ₁+ξ₂`, `ξ₃`, `ξ₄` (indexed by `|n|`).
    f1: Vec<f64>,
    f2: Vec<f64>,
    f12: Vec<f64>,
    f3: Vec<f64>,
    f4: Vec<f64>,
    /// `N^{3δ}`
    n3d: Vec<f64>,
}

impl TriKernel {
    fn new(config: &LatticeScanConfig) -> Self {
        let c = *config.cutoffs.last().unwrap();
        let t = Tables::new(config, 8 * c * c);
        let (a, g) = (t.alpha, t.gamma);
        let ones = vec![1.0; 2 * c + 1];
        let (f1, f2, f12) = match config.kind {
            MKind::M3 => (
                Tables::pow(c, a),
                Tables::pow(c, a - 1.0),
                Tables::pow(2 * c, -1.0),
            ),
            _ => (Tables::pow(c, a - 1.0), Tables::pow(c, a - 1.0), ones),
        };
        Self {
            c: c as i64,
            case: tri_case(config.kind),
            eps3: config.eps3_list(),
            f1,
            f2,
            f12,
            f3: Tables::pow(c, a),
            f4: Tables::pow(c, g - a),
            n3d: (0..=c).map(|n| (n as f64).powf(3.0 * t.delta)).collect(),
            t,
        }
    }

    fn run(&self, x1: i64) -> ScanPartial {
        let mut levels = vec![Best::NONE; self.c as usize + 1];
        if x1 == 0 {
            return ScanPartial { levels };
        }
        let c = self.c;
        for x2 in -c..=c {
            let s12 = x1 + x2;
            if x2 == 0 || s12 == 0 {
                continue;
            }
            let base = self.f1[ix(x1)] * self.f2[ix(x2)] * self.f12[ix(s12)];
            let n12 = x1.abs().max(x2.abs());
            // ξ₄ = -s12 - ξ₃ must stay in [-c, c] and be nonzero
            for x3 in (-c).max(-c - s12)..=c.min(c - s12) {
                let x4 = -s12 - x3;
                if x4 == 0 {
                    continue;
                }
                let n = n12.max(x3.abs()).max(x4.abs()) as usize;
                let w = base * self.f3[ix(x3)] * self.f4[ix(x4)] * self.n3d[n];
                let lv = &mut levels[n];
                for (slot, &e3) in self.eps3.iter().enumerate() {
                    let res = factored(x1, x2, x3, x4, e3, self.case);
                    let v = w / self.t.lmax[ix(res)];
                    if v > lv.value {
                        *lv = Best {
                            value: v,
                            tuple: [x1, x2, x3, x4],
                            sign_slot: slot as u8,
                        };
                    }
                }
            }
        }
        ScanPartial { levels }
    }
}

/// Expected verdict from the analytic region, or `None` within `margin` of
/// the boundary line (measured in `γ`).
pub fn analytic_verdict(kind: MKind, alpha: f64, gamma: f64, margin: f64) -> Option<Verdict> {
    let (bounded_above, line) = match kind {
        MKind::M1 => (true, 2.0 * alpha - 0.5),
        MKind::M2 | MKind::M4 => (false, 0.5),
        MKind::M3 => (false, (1.0 - 2.0 * alpha).min(0.5)),
    };
    let d = gamma - line;
    if d.abs() < margin - 1e-9 {
        return None;
    }
    Some(if (d > 0.0) == bounded_above {
        Verdict::Bounded
    } else {
        Verdict::Growing
    })
}

/// One point of a region map.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCell {
    pub kind: MKind,
    pub alpha: f64,
    pub gamma: f64,
    pub slope: f64,
    pub verdict: Verdict,
    /// `None` near the boundary.
    pub expected: Option<Verdict>,
}

impl RegionCell {
    /// `false` only if the scan contradicts a determinate analytic verdict.
    pub fn agrees(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict)
    }
}

/// Scans every `(α, γ)` of the grid for one kind. `map` runs the cells (in
/// grid order, `α` outer) and must return them in that order.
pub fn region_map_with<M>(
    kind: MKind,
    alphas: &[f64],
    gammas: &[f64],
    cutoffs: &[usize],
    delta: f64,
    margin: f64,
    map: M,
) -> Result<Vec<RegionCell>>
where
    M: FnOnce(&[(f64, f64)], &(dyn Fn(f64, f64) -> Result<RegionCell> + Sync)) -> Vec<Result<RegionCell>>,
{
    let grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| gammas.iter().map(move |&g| (a, g)))
        .collect();
    let cell = |alpha: f64, gamma: f64| -> Result<RegionCell> {
        let config = LatticeScanConfig {
            delta,
            ..LatticeScanConfig::new(kind, alpha, gamma, cutoffs.to_vec())
        };
        let r = scan_m(&config)?;
        Ok(RegionCell {
            kind,
            alpha,
            gamma,
            slope: r.fit.slope,
            verdict: r.verdict,
            expected: analytic_verdict(kind, alpha, gamma, margin),
        })
    };
    map(&grid, &cell).into_iter().collect()
}

/// Sequential [`region_map_with`].
pub fn region_map(
    kind: MKind,
    alphas: &[f64],
    gammas: &[f64],
    cutoffs: &[usize],
    delta: f64,
    margin: f64,
) -> Result<Vec<RegionCell>> {
    region_map_with(kind, alphas, gammas, cutoffs, delta, margin, |grid, f| {
        grid.iter().map(|&(a, g)| f(a, g)).collect()
    })
}

/// The grid `{0.05, 0.10, ..., 0.45}`.
pub fn default_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 * 0.05).collect()
}
