use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Build, verify and stress-test holonomic controlled gates on
/// decoherence-free encoded qubits.
#[derive(Debug, Parser)]
#[command(name = "hqc-dfs", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the logical gate, its analytic target and the fidelity.
    Gate(CommonArgs),
    /// Run unitarity, holonomy, DFS and fidelity checks (JSON report).
    Verify(CommonArgs),
    /// Verify every point of an angle grid (CSV table).
    Sweep(CommonArgs),
    /// Encoded versus unencoded fidelity under collective dephasing.
    Noise(CommonArgs),
    /// Verify all gate kinds and run the default noise experiment.
    All(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Gate(a) | Command::Verify(a) | Command::Sweep(a) | Command::Noise(a) | Command::All(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ensemble,
    Lindblad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionArg {
    Sequential,
    Parallel,
}

/// Angles accept `pi` expressions (`-pi/2`, `3*pi/4`). In `sweep`, every
/// angle also accepts a list `a,b,c` or an inclusive range `start:stop:count`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Gate kind: c1u, cnot, c2u, toffoli or fredkin [default: cnot].
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Overall phase δ; give together with --theta instead of --xi/--gamma.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Rotation angle θ; give together with --delta.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Fredkin coupling η [default: 1].
    #[arg(long)]
    pub eta: Option<String>,
    /// Controlled-gate coupling Ω [default: 1].
    #[arg(long)]
    pub omega: Option<String>,
    /// Logical role indices `m,n` or `m,n,l` (1-based).
    #[arg(long)]
    pub placement: Option<String>,
    /// Logical register size [default: smallest register holding the placement].
    #[arg(long)]
    pub logical: Option<usize>,
    /// Noise strengths (κ for lindblad, phase σ for ensemble) [default: 0,0.1,1,10 times the coupling].
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Phase-ensemble size [default: 512].
    #[arg(long)]
    pub samples: Option<usize>,
    /// RK4 step [default: gate period / 2000].
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pass threshold [default: 1e-8, noise 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads for sweeps and noise grids [default: available processors].
    #[arg(long)]
    pub workers: Option<usize>,
    /// How ensemble samples are summed.
    #[arg(long, value_enum)]
    pub reduction: Option<ReductionArg>,
    /// Add ε·X on physical qubit 1 (breaks the DFS).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb: Option<f64>,
    /// Multiply the holonomic pulse duration.
    #[arg(long)]
    pub pulse_scale: Option<f64>,
    /// Logical basis input for `noise`, e.g. `10` [default: uniform superposition].
    #[arg(long)]
    pub input: Option<String>,
    /// Rerun from a JSON report (or bare config) written by this tool.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    /// Names of the flags that change the physics (everything except output plumbing).
    pub fn physics_flags(&self) -> Vec<&'static str> {
        let set = [
            ("--kind", self.kind.is_some()),
            ("--xi", self.xi.is_some()),
            ("--gamma", self.gamma.is_some()),
            ("--alpha", self.alpha.is_some()),
            ("--beta", self.beta.is_some()),
            ("--delta", self.delta.is_some()),
            ("--theta", self.theta.is_some()),
            ("--eta", self.eta.is_some()),
            ("--omega", self.omega.is_some()),
            ("--placement", self.placement.is_some()),
            ("--logical", self.logical.is_some()),
            ("--kappa", self.kappa.is_some()),
            ("--model", self.model.is_some()),
            ("--samples", self.samples.is_some()),
            ("--dt", self.dt.is_some()),
            ("--seed", self.seed.is_some()),
            ("--tolerance", self.tolerance.is_some()),
            ("--reduction", self.reduction.is_some()),
            ("--perturb", self.perturb.is_some()),
            ("--pulse-scale", self.pulse_scale.is_some()),
            ("--input", self.input.is_some()),
        ];
        set.into_iter().filter(|(_, on)| *on).map(|(n, _)| n).collect()
    }
}
