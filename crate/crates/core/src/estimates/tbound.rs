use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::fit::{fit_loglog, LogLogFit};
use crate::normal_form::{apply_t_with, ModeTables, SignTriple};
use crate::spectral::{bracket, sobolev_norm, Sign, SpectralField};

/// `‖T^{+;ε₁,ε₂}(u, v)‖_{H¹} / (‖u‖_{L²} ‖v‖_{L²})`, zero for zero input.
pub fn t_ratio(u: &SpectralField, v: &SpectralField, eps1: Sign, eps2: Sign, alpha: f64) -> Result<f64> {
    u.check_trunc(v)?;
    let tables = ModeTables::new(u.trunc(), alpha);
    Ok(ratio_with(&tables, u, v, SignTriple::new(Sign::Plus, eps1, eps2)))
}

fn ratio_with(tables: &ModeTables, u: &SpectralField, v: &SpectralField, signs: SignTriple) -> f64 {
    let den = sobolev_norm(u, 0.0) * sobolev_norm(v, 0.0);
    if den == 0.0 {
        return 0.0;
    }
    sobolev_norm(&apply_t_with(tables, u, v, signs), 1.0) / den
}

/// Statistics for one truncation and sign pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TBoundRow {
    pub trunc: usize,
    pub eps1: Sign,
    pub eps2: Sign,
    pub random_max: f64,
    pub random_median: f64,
    pub adversarial_max: f64,
    /// Name of the adversarial input attaining `adversarial_max`.
    pub adversarial_argmax: String,
    /// Largest ratio among adversarial inputs whose support moves with `N`.
    pub scaling_max: f64,
}

impl TBoundRow {
    pub fn max(&self) -> f64 {
        self.random_max.max(self.adversarial_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TBoundReport {
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<TBoundRow>,
    pub n_list: Vec<usize>,
    /// Largest ratio per truncation over signs and inputs.
    pub max_per_n: Vec<f64>,
    pub fit: LogLogFit,
    /// Same for the inputs that move with `N` only. The overall maximum is
    /// attained by fixed low modes, so this is the sharper growth check.
    pub scaling_max_per_n: Vec<f64>,
    pub scaling_fit: LogLogFit,
}

/// One adversarial pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialInput {
    pub name: String,
    pub u: SpectralField,
    pub v: SpectralField,
    /// `false` for the fixed low-mode pairs.
    pub scales: bool,
}

/// Unit-`L²` field with i.i.d. complex Gaussian coefficients on `0 < |n| ≤ N`.
fn random_unit(trunc: usize, rng: &mut ChaCha8Rng) -> SpectralField {
    let u = SpectralField::from_fn(trunc, |n| {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    u.scale_real(1.0 / u.l2_norm())
}

fn normalized(trunc: usize, f: impl FnMut(i64) -> Complex64) -> SpectralField {
    let u = SpectralField::from_fn(trunc, f);
    let norm = u.l2_norm();
    u.scale_real(1.0 / norm)
}

fn single(trunc: usize, n: i64) -> SpectralField {
    SpectralField::mode(trunc, n, Complex64::new(1.0, 0.0)).expect("mode within truncation")
}

/// Inputs aimed at the three size regimes of the symbol.
pub fn adversarial_inputs(trunc: usize, alpha: f64) -> Vec<AdversarialInput> {
    let n = trunc as i64;
    let half = n / 2;
    let quarter = (n / 4).max(1);
    let mut out = Vec::new();
    let mut push = |name: String, u: SpectralField, v: SpectralField, scales: bool| {
        out.push(AdversarialInput { name, u, v, scales });
    };
    for a in -4..=4i64 {
        for b in -4..=4i64 {
            if a != 0 && b != 0 && a + b != 0 {
                push(format!("modes({a},{b})"), single(trunc, a), single(trunc, b), false);
            }
        }
    }
    push(format!("modes({n},{})", 1 - n), single(trunc, n), single(trunc, 1 - n), true);
    push(format!("modes({},{n})", 1 - n), single(trunc, 1 - n), single(trunc, n), true);
    // |η| ≪ |ξ|: one high mode against the extremiser ⟨η⟩^{α-1} of the low one
    let profile = |sign: i64| {
        normalized(trunc, move |k| {
            if k * sign > 0 && k.abs() <= half {
                Complex64::new(bracket(k).powf(alpha - 1.0), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    for (tag, s) in [("+", 1), ("-", -1)] {
        push(format!("high({half})*profile{tag}"), single(trunc, half), profile(s), true);
        push(format!("profile{tag}*high({half})"), profile(s), single(trunc, half), true);
        push(format!("high({})*profile{tag}", -half), single(trunc, -half), profile(s), true);
    }
    // |η| ≳ |ξ|: flat dyadic blocks
    let block = |lo: i64, hi: i64| {
        normalized(trunc, move |k| {
            if (lo..=hi).contains(&k) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let pos = block(quarter, half);
    let neg = block(-half, -quarter);
    push("block+*block+".into(), pos.clone(), pos.clone(), true);
    push("block+*block-".into(), pos.clone(), neg.clone(), true);
    push("block-*block+".into(), neg, pos, true);
    out
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Rows of one truncation, in the sign order `(+,+), (+,-), (-,+), (-,-)`.
pub fn t_bound_cell(alpha: f64, trials: usize, trunc: usize, seed: u64) -> Vec<TBoundRow> {
    let tables = ModeTables::new(trunc, alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trunc as u64);
    let pairs: Vec<_> = (0..trials)
        .map(|_| (random_unit(trunc, &mut rng), random_unit(trunc, &mut rng)))
        .collect();
    let adversarial = adversarial_inputs(trunc, alpha);
    let mut rows = Vec::with_capacity(4);
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            let signs = SignTriple::new(Sign::Plus, e1, e2);
            let random: Vec<f64> = pairs
                .iter()
                .map(|(u, v)| ratio_with(&tables, u, v, signs))
                .collect();
            let (mut best, mut label, mut scaling) = (0.0, String::new(), 0.0f64);
            for input in &adversarial {
                let r = ratio_with(&tables, &input.u, &input.v, signs);
                if r > best {
                    best = r;
                    label = input.name.clone();
                }
                if input.scales {
                    scaling = scaling.max(r);
                }
            }
            rows.push(TBoundRow {
                trunc,
                eps1: e1,
                eps2: e2,
                random_max: random.iter().copied().fold(0.0, f64::max),
                random_median: if random.is_empty() { 0.0 } else { median(random) },
                adversarial_max: best,
                adversarial_argmax: label,
                scaling_max: scaling,
            });
        }
    }
    rows
}

/// Random and adversarial trials for every truncation, with the cross-`N`
/// slope of the largest ratio.
pub fn test_t_boundedness(alpha: f64, trials: usize, n_list: &[usize], seed: u64) -> Result<TBoundReport> {
    test_t_boundedness_with(alpha, trials, n_list, seed, |f| {
        n_list.iter().map(|&n| f(n)).collect()
    })
}

/// Like [`test_t_boundedness`] with a caller supplied map over truncations;
/// results must come back in the order of `n_list`.
pub fn test_t_boundedness_with<M>(
    alpha: f64,
    trials: usize,
    n_list: &[usize],
    seed: u64,
    map: M,
) -> Result<TBoundReport>
where
    M: FnOnce(&(dyn Fn(usize) -> Vec<TBoundRow> + Sync)) -> Vec<Vec<TBoundRow>>,
{
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(invalid("alpha", format!("must lie in (0, 1/2), got {alpha}")));
    }
    if n_list.iter().any(|&n| n < 8) {
        return Err(invalid("n", "truncations must be at least 8"));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("n", "truncations must increase"));
    }
    let cell = |n: usize| t_bound_cell(alpha, trials, n, seed);
    let cells = map(&cell);
    if cells.len() != n_list.len() {
        return Err(Error::Malformed("t-bound map returned the wrong number of cells".into()));
    }
    let max_per_n: Vec<f64> = cells
        .iter()
        .map(|rows| rows.iter().map(TBoundRow::max).fold(0.0, f64::max))
        .collect();
    let scaling_max_per_n: Vec<f64> = cells
        .iter()
        .map(|rows| rows.iter().map(|r| r.scaling_max).fold(0.0, f64::max))
        .collect();
    let xs: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let fit = fit_loglog(&xs, &max_per_n)?;
    let scaling_fit = fit_loglog(&xs, &scaling_max_per_n)?;
    Ok(TBoundReport {
        alpha,
        trials,
        seed,
        rows: cells.into_iter().flatten().collect(),
        n_list: n_list.to_vec(),
        max_per_n,
        fit,
        scaling_max_per_n,
        scaling_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input_has_zero_ratio() {
        let z = SpectralField::zeros(16);
        let u = single(16, 3);
        assert_eq!(t_ratio(&z, &u, Sign::Plus, Sign::Minus, 0.25).unwrap(), 0.0);
        assert_eq!(t_ratio(&u, &z, Sign::Plus, Sign::Plus, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn counterexample_pair_in_closed_form() {
        let alpha = 0.25;
        for n in [16usize, 64] {
            let m = n as i64;
            let r = t_ratio(&single(n, m), &single(n, 1 - m), Sign::Plus, Sign::Minus, alpha).unwrap();
            // output at frequency 1: ⟨1⟩ |σ(N, 1-N)|
            let d = bracket(m) * m as f64 - bracket(m - 1) * (m - 1) as f64 - std::f64::consts::SQRT_2;
            let sigma = 0.5 * bracket(m).powf(alpha) * bracket(m - 1).powf(alpha)
                / (std::f64::consts::SQRT_2.powf(1.0 + alpha) * d);
            let want = std::f64::consts::SQRT_2 * sigma;
            assert!((r / want - 1.0).abs() < 1e-12);
            let rows = t_bound_cell(alpha, 4, n, 1);
            let measured = rows.iter().map(TBoundRow::max).fold(0.0, f64::max);
            assert!(r <= measured);
        }
    }

    #[test]
    fn cells_are_deterministic() {
        assert_eq!(t_bound_cell(0.3, 3, 16, 5), t_bound_cell(0.3, 3, 16, 5));
        assert_ne!(t_bound_cell(0.3, 3, 16, 5), t_bound_cell(0.3, 3, 16, 6));
    }
}
