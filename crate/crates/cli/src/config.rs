use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodbsq_core::dynamics::MeanDrift;
use goodbsq_core::estimates::{default_counterexample_ns, MKind};
use goodbsq_core::spectral::dispersion;
use goodbsq_core::{ModelParams, Sign};
use serde::Serialize;

use crate::error::{invalid, CliError};

#[derive(Debug, Parser)]
#[command(name = "goodbsq", version, about = "Periodic good Boussinesq: simulation, normal form and multiplier scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the equation directly and record norms.
    Simulate(Opts),
    /// Integrate the normal-form remainder and measure z.
    Decompose(Opts),
    /// Growth of sup_t ||z||_{H^beta} across truncations.
    SmoothingScan(Opts),
    /// Lattice suprema of the M1..M4 multipliers, or a region map.
    SymbolScan(Opts),
    /// Sharpness constant C(N) and its exponent.
    Counterexample(Opts),
    /// Random and adversarial trials of ||T(u,v)||_{H^1}.
    TBound(Opts),
}

impl Command {
    pub fn opts(&self) -> &Opts {
        match self {
            Command::Simulate(o)
            | Command::Decompose(o)
            | Command::SmoothingScan(o)
            | Command::SymbolScan(o)
            | Command::Counterexample(o)
            | Command::TBound(o) => o,
        }
    }

    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Simulate(_) => CommandKind::Simulate,
            Command::Decompose(_) => CommandKind::Decompose,
            Command::SmoothingScan(_) => CommandKind::SmoothingScan,
            Command::SymbolScan(_) => CommandKind::SymbolScan,
            Command::Counterexample(_) => CommandKind::Counterexample,
            Command::TBound(_) => CommandKind::TBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    Decompose,
    SmoothingScan,
    SymbolScan,
    Counterexample,
    TBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    /// u0 in H^{-alpha}, u1 in H^{-alpha-2} with random phases
    Rough,
    /// a few low cosines and sines
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DriftArg {
    Reduced,
    Coupled,
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file and then to the per-command default.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Flat key = value file with the same keys as the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Repeatable; the first value fixes gamma - alpha
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Vec<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Truncation or cutoff, repeatable
    #[arg(long = "n")]
    pub n: Vec<u64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// M1, M2, M3 or M4
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps3: Option<String>,
    /// Scan the 9x9 (alpha, gamma) grid instead of one point
    #[arg(long)]
    pub region: bool,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum)]
    pub data: Option<DataKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub mean0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mean1: Option<f64>,
    #[arg(long, value_enum)]
    pub drift: Option<DriftArg>,
}

/// Everything a run depends on, after merging flags, file and defaults.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub alpha: f64,
    pub gamma: f64,
    pub betas: Vec<f64>,
    pub delta: f64,
    pub n_list: Vec<u64>,
    pub dt: f64,
    pub horizon: f64,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: Format,
    pub kind: String,
    pub eps1: Option<String>,
    pub eps2: Option<String>,
    pub eps3: Option<String>,
    pub region: bool,
    pub trials: usize,
    pub data: DataKind,
    pub mean0: f64,
    pub mean1: f64,
    pub drift: DriftArg,
}

const KEYS: &[&str] = &[
    "alpha", "gamma", "beta", "delta", "n", "dt", "horizon", "seed", "out", "format", "kind",
    "eps1", "eps2", "eps3", "region", "trials", "data", "mean0", "mean1", "drift",
];

fn read_file(path: &Path) -> Result<Opts, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        context: format!("reading {}", path.display()),
        source: e,
    })?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| invalid("config", e.message().to_string()))?;
    if table.is_empty() {
        return Err(invalid(
            "config",
            format!("{} sets no keys; expected some of: {}", path.display(), KEYS.join(", ")),
        ));
    }
    let mut o = Opts::default();
    for (key, value) in &table {
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(key, "unknown config key"));
        }
        let num = || -> Result<f64, CliError> {
            value
                .as_float()
                .or_else(|| value.as_integer().map(|i| i as f64))
                .ok_or_else(|| invalid(key, "expected a number"))
        };
        let uint = |v: &toml::Value| -> Result<u64, CliError> {
            v.as_integer()
                .filter(|i| *i >= 0)
                .map(|i| i as u64)
                .ok_or_else(|| invalid(key, "expected a non-negative integer"))
        };
        let text = || -> Result<String, CliError> {
            value
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid(key, "expected a string"))
        };
        let list = || -> Vec<toml::Value> {
            match value.as_array() {
                Some(a) => a.clone(),
                None => vec![value.clone()],
            }
        };
        match key.as_str() {
            "alpha" => o.alpha = Some(num()?),
            "gamma" => o.gamma = Some(num()?),
            "delta" => o.delta = Some(num()?),
            "dt" => o.dt = Some(num()?),
            "horizon" => o.horizon = Some(num()?),
            "mean0" => o.mean0 = Some(num()?),
            "mean1" => o.mean1 = Some(num()?),
            "seed" => o.seed = Some(uint(value)?),
            "trials" => o.trials = Some(uint(value)? as usize),
            "beta" => {
                o.beta = list()
                    .iter()
                    .map(|v| {
                        v.as_float()
                            .or_else(|| v.as_integer().map(|i| i as f64))
                            .ok_or_else(|| invalid("beta", "expected numbers"))
                    })
                    .collect::<Result<_, _>>()?
            }
            "n" => o.n = list().iter().map(uint).collect::<Result<_, _>>()?,
            "out" => o.out = Some(PathBuf::from(text()?)),
            "format" => o.format = Some(parse_enum(key, &text()?)?),
            "data" => o.data = Some(parse_enum(key, &text()?)?),
            "drift" => o.drift = Some(parse_enum(key, &text()?)?),
            "kind" => o.kind = Some(text()?),
            "eps1" => o.eps1 = Some(text()?),
            "eps2" => o.eps2 = Some(text()?),
            "eps3" => o.eps3 = Some(text()?),
            "region" => {
                o.region = value
                    .as_bool()
                    .ok_or_else(|| invalid("region", "expected true or false"))?
            }
            _ => unreachable!("key list checked above"),
        }
    }
    Ok(o)
}

fn parse_enum<T: ValueEnum>(key: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| invalid(key, format!("unexpected value {s:?}")))
}

/// `+`, `-`, `+1`, `-1`, `plus`, `minus`.
pub fn parse_sign(field: &str, s: &str) -> Result<Sign, CliError> {
    match s.trim() {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        _ => Err(invalid(field, format!("expected + or -, got {s:?}"))),
    }
}

fn merge(cli: &Opts, file: Opts) -> Opts {
    Opts {
        config: cli.config.clone(),
        alpha: cli.alpha.or(file.alpha),
        gamma: cli.gamma.or(file.gamma),
        beta: if cli.beta.is_empty() { file.beta } else { cli.beta.clone() },
        delta: cli.delta.or(file.delta),
        n: if cli.n.is_empty() { file.n } else { cli.n.clone() },
        dt: cli.dt.or(file.dt),
        horizon: cli.horizon.or(file.horizon),
        seed: cli.seed.or(file.seed),
        out: cli.out.clone().or(file.out),
        format: cli.format.or(file.format),
        kind: cli.kind.clone().or(file.kind),
        eps1: cli.eps1.clone().or(file.eps1),
        eps2: cli.eps2.clone().or(file.eps2),
        eps3: cli.eps3.clone().or(file.eps3),
        region: cli.region || file.region,
        trials: cli.trials.or(file.trials),
        data: cli.data.or(file.data),
        mean0: cli.mean0.or(file.mean0),
        mean1: cli.mean1.or(file.mean1),
        drift: cli.drift.or(file.drift),
    }
}

fn default_n(command: CommandKind) -> Vec<u64> {
    match command {
        CommandKind::Simulate | CommandKind::Decompose => vec![64],
        CommandKind::SmoothingScan | CommandKind::SymbolScan => vec![32, 64, 128, 256],
        CommandKind::Counterexample => default_counterexample_ns(),
        CommandKind::TBound => vec![16, 64, 256, 1024],
    }
}

impl RunConfig {
    pub fn resolve(command: CommandKind, cli: &Opts) -> Result<Self, CliError> {
        let o = match &cli.config {
            Some(path) => merge(cli, read_file(path)?),
            None => cli.clone(),
        };
        let alpha = o.alpha.unwrap_or(ModelParams::default().alpha);
        let (gamma, betas) = match (o.gamma, o.beta.first()) {
            (Some(g), None) => (g, vec![g - alpha]),
            (None, Some(&b)) => (alpha + b, o.beta.clone()),
            (Some(g), Some(&b)) => {
                if command != CommandKind::SmoothingScan && (g - alpha - b).abs() > 1e-12 {
                    return Err(invalid("beta", format!("must equal gamma - alpha = {}, got {b}", g - alpha)));
                }
                (g, o.beta.clone())
            }
            (None, None) => (alpha + 0.05, vec![0.05]),
        };
        let n_list = if o.n.is_empty() { default_n(command) } else { o.n.clone() };
        let trunc = n_list[0];
        let dt = match o.dt {
            Some(dt) => dt,
            None if matches!(command, CommandKind::Simulate | CommandKind::Decompose) => {
                0.2 / dispersion(trunc as i64)
            }
            None => 1.0,
        };
        let config = RunConfig {
            command,
            alpha,
            gamma,
            betas,
            delta: o.delta.unwrap_or(0.01),
            n_list,
            dt,
            horizon: o.horizon.unwrap_or(0.25),
            seed: o.seed.unwrap_or(0),
            out: o.out.unwrap_or_else(|| PathBuf::from("goodbsq-out")),
            format: o.format.unwrap_or(Format::Csv),
            kind: o.kind.unwrap_or_else(|| "M1".into()),
            eps1: o.eps1,
            eps2: o.eps2,
            eps3: o.eps3,
            region: o.region,
            trials: o.trials.unwrap_or(100),
            data: o.data.unwrap_or(DataKind::Rough),
            mean0: o.mean0.unwrap_or(0.0),
            mean1: o.mean1.unwrap_or(0.0),
            drift: o.drift.unwrap_or(DriftArg::Reduced),
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), CliError> {
        let single = matches!(self.command, CommandKind::Simulate | CommandKind::Decompose);
        if single && self.n_list.len() != 1 {
            return Err(invalid("n", "expects exactly one truncation"));
        }
        let scans = matches!(
            self.command,
            CommandKind::SmoothingScan | CommandKind::SymbolScan | CommandKind::Counterexample | CommandKind::TBound
        );
        if scans && self.n_list.len() < 3 {
            return Err(invalid("n", "need at least three values for a fit"));
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("n", "values must increase"));
        }
        if self.command != CommandKind::Counterexample && self.n_list.iter().any(|&n| n > 1 << 16) {
            return Err(invalid("n", "truncation too large"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be positive"));
        }
        if self.command == CommandKind::SymbolScan {
            MKind::parse(&self.kind)?;
        }
        for (field, s) in [("eps1", &self.eps1), ("eps2", &self.eps2), ("eps3", &self.eps3)] {
            if let Some(s) = s {
                parse_sign(field, s)?;
            }
        }
        if self.command == CommandKind::Decompose && self.drift == DriftArg::Coupled {
            return Err(invalid("drift", "the decomposed solver needs the reduced drift"));
        }
        if !scans || self.command == CommandKind::SmoothingScan {
            self.params()?.validate()?;
        }
        Ok(())
    }

    pub fn trunc(&self) -> usize {
        self.n_list[0] as usize
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams {
            alpha: self.alpha,
            gamma: self.gamma,
            beta: self.gamma - self.alpha,
            delta: self.delta,
            a0: 2.0 * self.mean0,
            a1: 2.0 * self.mean1,
            trunc: self.trunc(),
            dt: self.dt,
            horizon: self.horizon,
        })
    }

    pub fn mean_drift(&self) -> MeanDrift {
        match self.drift {
            DriftArg::Reduced => MeanDrift::Reduced,
            DriftArg::Coupled => MeanDrift::Coupled,
        }
    }

    pub fn sign(&self, field: &str) -> Result<Option<Sign>, CliError> {
        let s = match field {
            "eps1" => &self.eps1,
            "eps2" => &self.eps2,
            _ => &self.eps3,
        };
        s.as_deref().map(|s| parse_sign(field, s)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_parse() {
        for s in ["+", "+1", "1", "plus"] {
            assert_eq!(parse_sign("eps1", s).unwrap(), Sign::Plus);
        }
        for s in ["-", "-1", "minus"] {
            assert_eq!(parse_sign("eps1", s).unwrap(), Sign::Minus);
        }
        assert!(parse_sign("eps1", "0").is_err());
    }

    #[test]
    fn defaults_per_command() {
        let o = Opts::default();
        let sim = RunConfig::resolve(CommandKind::Simulate, &o).unwrap();
        assert_eq!(sim.n_list, vec![64]);
        assert_eq!(sim.dt, 0.2 / dispersion(64));
        assert!((sim.gamma - 0.35).abs() < 1e-15);
        let ce = RunConfig::resolve(CommandKind::Counterexample, &o).unwrap();
        assert_eq!(ce.n_list.len(), 15);
        let tb = RunConfig::resolve(CommandKind::TBound, &o).unwrap();
        assert_eq!(tb.n_list, vec![16, 64, 256, 1024]);
    }

    #[test]
    fn beta_fixes_gamma() {
        let o = Opts {
            alpha: Some(0.2),
            beta: vec![0.1],
            ..Opts::default()
        };
        let c = RunConfig::resolve(CommandKind::Simulate, &o).unwrap();
        assert!((c.gamma - 0.3).abs() < 1e-15);
        assert_eq!(c.params().unwrap().a0, 0.0);
    }

    #[test]
    fn cli_beats_file() {
        let file = Opts {
            alpha: Some(0.1),
            gamma: Some(0.2),
            n: vec![8, 16, 32],
            ..Opts::default()
        };
        let cli = Opts {
            gamma: Some(0.4),
            ..Opts::default()
        };
        let m = merge(&cli, file);
        assert_eq!((m.alpha, m.gamma, m.n.len()), (Some(0.1), Some(0.4), 3));
    }

    #[test]
    fn decompose_rejects_coupled_drift() {
        let o = Opts {
            drift: Some(DriftArg::Coupled),
            ..Opts::default()
        };
        assert!(RunConfig::resolve(CommandKind::Simulate, &o).is_ok());
        let e = RunConfig::resolve(CommandKind::Decompose, &o).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
