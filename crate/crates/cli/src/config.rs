//! Resolution of command-line flags (or a saved report) into a complete,
//! serializable run configuration.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use hqc_core::dephasing::{DEFAULT_SAMPLES, DEFAULT_SEED};
use hqc_core::{GateKind, NoiseConfig, NoiseModel, Placement, Reduction};
use serde::{Deserialize, Serialize};

use crate::angles::{parse_grid, parse_value};
use crate::args::{CommonArgs, FormatArg, ModelArg, ReductionArg};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Gate,
    Verify,
    Sweep,
    Noise,
    All,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::Gate => "gate",
            CommandName::Verify => "verify",
            CommandName::Sweep => "sweep",
            CommandName::Noise => "noise",
            CommandName::All => "all",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            CommandName::Noise => 1e-6,
            _ => 1e-8,
        }
    }

    fn formats(self) -> &'static [FormatArg] {
        match self {
            CommandName::Gate => &[FormatArg::Text, FormatArg::Json],
            CommandName::Verify | CommandName::All => &[FormatArg::Json, FormatArg::Text],
            CommandName::Sweep => &[FormatArg::Csv, FormatArg::Json],
            CommandName::Noise => &[FormatArg::Json, FormatArg::Csv],
        }
    }
}

/// The rotation parameters, given either as (ξ, γ) or as (δ, θ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PhasePair {
    XiGamma { xi: Vec<f64>, gamma: Vec<f64> },
    DeltaTheta { delta: Vec<f64>, theta: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSpec {
    pub pair: PhasePair,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl AngleSpec {
    /// Grid axes in sweep order (first axis outermost).
    pub fn axes(&self) -> [&[f64]; 4] {
        match &self.pair {
            PhasePair::XiGamma { xi, gamma } => [xi, gamma, &self.alpha, &self.beta],
            PhasePair::DeltaTheta { delta, theta } => [delta, theta, &self.alpha, &self.beta],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub strengths: Vec<f64>,
    pub samples: usize,
    pub dt: Option<f64>,
    pub seed: u64,
    pub reduction: Reduction,
}

impl NoiseSpec {
    pub fn at(&self, strength: f64) -> NoiseConfig {
        NoiseConfig {
            model: self.model,
            strength,
            n_samples: self.samples,
            dt: self.dt,
            seed: self.seed,
            reduction: self.reduction,
        }
    }
}

/// Everything that determines the numbers in a report. Embedded verbatim in
/// every JSON report so that `--config report.json` reruns it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub kind: GateKind,
    pub omega: f64,
    /// Rotation angles of controlled gates; absent for Fredkin and `all`.
    pub angles: Option<AngleSpec>,
    pub eta: Vec<f64>,
    pub placement: Vec<usize>,
    pub n_logical: usize,
    pub tolerance: f64,
    pub perturb: f64,
    pub pulse_scale: f64,
    pub noise: NoiseSpec,
    pub input: Option<String>,
}

impl RunConfig {
    pub fn placement(&self) -> CliResult<Placement> {
        Ok(Placement::new(self.placement.clone(), self.n_logical)?)
    }

    /// Scale used for the default noise grid and the bare baseline.
    pub fn coupling(&self) -> f64 {
        if self.kind == GateKind::Fredkin {
            self.eta[0]
        } else {
            self.omega
        }
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(CliError::usage(format!("omega must be positive, got {}", self.omega)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::usage(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !self.perturb.is_finite() {
            return Err(CliError::usage("perturbation must be finite"));
        }
        if !(self.pulse_scale.is_finite() && self.pulse_scale >= 0.0) {
            return Err(CliError::usage("pulse scale must be finite and non-negative"));
        }
        if self.eta.is_empty() || self.eta.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CliError::usage("eta values must be positive"));
        }
        let single = self.command != CommandName::Sweep;
        if let Some(a) = &self.angles {
            for axis in a.axes() {
                if axis.is_empty() {
                    return Err(CliError::usage("empty angle grid"));
                }
                if single && axis.len() != 1 {
                    return Err(CliError::usage("only `sweep` accepts angle lists and ranges"));
                }
                if axis.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::usage("angles must be finite"));
                }
            }
        }
        if single && self.eta.len() != 1 {
            return Err(CliError::usage("only `sweep` accepts a list of eta values"));
        }
        if self.noise.strengths.is_empty() {
            return Err(CliError::usage("empty noise-strength grid"));
        }
        for &s in &self.noise.strengths {
            self.noise.at(s).validate()?;
        }
        if self.command != CommandName::All {
            let p = self.placement()?;
            if p.arity() != self.kind.arity() {
                return Err(CliError::usage(format!(
                    "{} takes {} placement indices, got {}",
                    self.kind,
                    self.kind.arity(),
                    p.arity()
                )));
            }
        }
        if let Some(bits) = &self.input {
            if bits.len() != self.n_logical || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(CliError::usage(format!(
                    "--input must be {} binary digits, got '{bits}'",
                    self.n_logical
                )));
            }
        }
        Ok(())
    }
}

/// Output plumbing that does not affect any number in a report.
#[derive(Debug, Clone)]
pub struct Runtime {
    pub format: FormatArg,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

fn usage<E: std::fmt::Display>(flag: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::usage(format!("{flag}: {e}"))
}

fn scalar(flag: &str, v: &Option<String>, default: f64) -> CliResult<f64> {
    v.as_deref()
        .map_or(Ok(default), |s| parse_value(s).map_err(usage(flag)))
}

fn grid(flag: &str, v: &Option<String>, default: f64) -> CliResult<Vec<f64>> {
    match v.as_deref() {
        None => Ok(vec![default]),
        Some(s) => parse_grid(s).map_err(usage(flag)),
    }
}

fn parse_placement(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(usage("--placement")))
        .collect()
}

fn angle_spec(a: &CommonArgs) -> CliResult<AngleSpec> {
    let has_xg = a.xi.is_some() || a.gamma.is_some();
    let has_dt = a.delta.is_some() || a.theta.is_some();
    let pair = match (has_xg, has_dt) {
        (true, true) => {
            return Err(CliError::usage(
                "give the angles as --xi/--gamma or as --delta/--theta, not both",
            ))
        }
        (false, true) => match (&a.delta, &a.theta) {
            (Some(_), Some(_)) => PhasePair::DeltaTheta {
                delta: grid("--delta", &a.delta, 0.0)?,
                theta: grid("--theta", &a.theta, 0.0)?,
            },
            _ => return Err(CliError::usage("--delta and --theta must be given together")),
        },
        _ => PhasePair::XiGamma {
            xi: grid("--xi", &a.xi, FRAC_PI_2)?,
            gamma: grid("--gamma", &a.gamma, 0.0)?,
        },
    };
    Ok(AngleSpec {
        pair,
        alpha: grid("--alpha", &a.alpha, FRAC_PI_2)?,
        beta: grid("--beta", &a.beta, 0.0)?,
    })
}

fn from_flags(command: CommandName, a: &CommonArgs) -> CliResult<RunConfig> {
    let angle_flags = [&a.xi, &a.gamma, &a.alpha, &a.beta, &a.delta, &a.theta]
        .iter()
        .any(|f| f.is_some());
    if command == CommandName::All {
        let rejected: Vec<_> = [
            ("--kind", a.kind.is_some()),
            ("angle flags", angle_flags),
            ("--placement", a.placement.is_some()),
            ("--logical", a.logical.is_some()),
            ("--input", a.input.is_some()),
        ]
        .into_iter()
        .filter(|(_, on)| *on)
        .map(|(n, _)| n)
        .collect();
        if !rejected.is_empty() {
            return Err(CliError::usage(format!("`all` does not take {}", rejected.join(", "))));
        }
    }
    let kind: GateKind = match &a.kind {
        Some(k) => k.parse()?,
        None => GateKind::Cnot,
    };
    let omega = scalar("--omega", &a.omega, 1.0)?;
    let (angles, eta) = if kind == GateKind::Fredkin && command != CommandName::All {
        if angle_flags {
            return Err(CliError::usage("fredkin is set by --eta alone, not by rotation angles"));
        }
        (None, grid("--eta", &a.eta, 1.0)?)
    } else if command == CommandName::All {
        (None, vec![scalar("--eta", &a.eta, 1.0)?])
    } else {
        if a.eta.is_some() {
            return Err(CliError::usage(format!("--eta applies to fredkin, not {kind}")));
        }
        (Some(angle_spec(a)?), vec![1.0])
    };
    let placement = match &a.placement {
        Some(s) => parse_placement(s)?,
        None => (1..=kind.arity()).collect(),
    };
    let widest = placement.iter().copied().max().unwrap_or(0).max(kind.arity());
    let n_logical = a.logical.unwrap_or(widest);

    let coupling = if kind == GateKind::Fredkin { eta[0] } else { omega };
    let strengths = match &a.kappa {
        Some(s) => parse_grid(s).map_err(usage("--kappa"))?,
        None => [0.0, 0.1, 1.0, 10.0].iter().map(|k| k * coupling).collect(),
    };
    let dt = match &a.dt {
        Some(s) => Some(parse_value(s).map_err(usage("--dt"))?),
        None => None,
    };
    let noise = NoiseSpec {
        model: match a.model.unwrap_or(ModelArg::Lindblad) {
            ModelArg::Ensemble => NoiseModel::PhaseEnsemble,
            ModelArg::Lindblad => NoiseModel::Lindblad,
        },
        strengths,
        samples: a.samples.unwrap_or(DEFAULT_SAMPLES),
        dt,
        seed: a.seed.unwrap_or(DEFAULT_SEED),
        reduction: match a.reduction.unwrap_or(ReductionArg::Sequential) {
            ReductionArg::Sequential => Reduction::Sequential,
            ReductionArg::Parallel => Reduction::Parallel,
        },
    };
    Ok(RunConfig {
        command,
        kind,
        omega,
        angles,
        eta,
        placement,
        n_logical,
        tolerance: a.tolerance.unwrap_or(command.default_tolerance()),
        perturb: a.perturb.unwrap_or(0.0),
        pulse_scale: a.pulse_scale.unwrap_or(1.0),
        noise,
        input: a.input.clone(),
    })
}

fn from_file(command: CommandName, path: &Path, a: &CommonArgs) -> CliResult<RunConfig> {
    let flags = a.physics_flags();
    if !flags.is_empty() {
        return Err(CliError::usage(format!(
            "--config cannot be combined with {}",
            flags.join(", ")
        )));
    }
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{} is not JSON: {e}", path.display())))?;
    if let Some(embedded) = value.get_mut("config") {
        value = embedded.take();
    }
    let cfg: RunConfig = serde_json::from_value(value)
        .map_err(|e| CliError::usage(format!("{} holds no valid run config: {e}", path.display())))?;
    if cfg.command != command {
        return Err(CliError::usage(format!(
            "{} holds a `{}` config, not `{}`",
            path.display(),
            cfg.command.name(),
            command.name()
        )));
    }
    Ok(cfg)
}

/// Resolves flags into the run configuration and output settings.
pub fn resolve(command: CommandName, a: &CommonArgs) -> CliResult<(RunConfig, Runtime)> {
    let cfg = match &a.config {
        Some(path) => from_file(command, path, a)?,
        None => from_flags(command, a)?,
    };
    cfg.validate()?;
    let allowed = command.formats();
    let format = a.format.unwrap_or(allowed[0]);
    if !allowed.contains(&format) {
        return Err(CliError::usage(format!(
            "format {format:?} is not available for this command"
        )));
    }
    let workers = match a.workers {
        Some(0) => return Err(CliError::usage("--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok((
        cfg,
        Runtime {
            format,
            out: a.out.clone(),
            workers,
        },
    ))
}
