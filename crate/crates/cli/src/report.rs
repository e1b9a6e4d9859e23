//! Report documents. Every JSON report carries `schema_version`, the
//! generating tool, and the resolved [`RunConfig`].

use hqc_core::{CheckResult, ComplexMatrix, GateInstance, GateKind, GateSettings, C64};
use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Complex>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| z.into()).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Generator {
    pub name: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
}

impl Generator {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            core_version: hqc_core::VERSION,
        }
    }
}

/// Parameters and derived quantities of one built gate.
#[derive(Debug, Serialize)]
pub struct GateInfo {
    pub kind: GateKind,
    pub placement: Vec<usize>,
    pub n_logical: usize,
    pub n_physical: usize,
    pub omega: Option<f64>,
    pub xi: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub delta_raw: Option<f64>,
    pub theta_raw: Option<f64>,
    pub pulse_area: f64,
    pub tau: f64,
    pub frame_dim: usize,
    pub perturbation: f64,
}

impl GateInfo {
    pub fn of(g: &GateInstance) -> Self {
        let (omega, angles, eta) = match g.settings {
            GateSettings::Controlled(p) => (Some(p.omega), Some((p.xi, p.gamma, p.alpha, p.beta)), None),
            GateSettings::Fredkin(p) => (None, None, Some(p.eta)),
        };
        Self {
            kind: g.kind,
            placement: g.placement.roles().to_vec(),
            n_logical: g.placement.n_logical(),
            n_physical: g.placement.n_physical(),
            omega,
            xi: angles.map(|a| a.0),
            gamma: angles.map(|a| a.1),
            alpha: angles.map(|a| a.2),
            beta: angles.map(|a| a.3),
            eta,
            delta: g.phases.map(|p| p.delta),
            theta: g.phases.map(|p| p.theta),
            delta_raw: g.phases.map(|p| p.delta_raw),
            theta_raw: g.phases.map(|p| p.theta_raw),
            pulse_area: g.pulse_area,
            tau: g.tau,
            frame_dim: g.frame.dim(),
            perturbation: g.perturbation,
        }
    }
}

/// What ξ = π (with the other CNOT angles unchanged) produces instead of a NOT.
#[derive(Debug, Serialize)]
pub struct XiPiVariant {
    pub xi: f64,
    pub realized_block: Vec<Vec<Complex>>,
    pub distance_to_minus_identity: f64,
    pub fidelity_vs_cnot: f64,
}

#[derive(Debug, Serialize)]
pub struct GateReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub config: RunConfig,
    pub gate: GateInfo,
    pub u_logical: Vec<Vec<Complex>>,
    pub target: Vec<Vec<Complex>>,
    pub fidelity: f64,
    pub phase_distance: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_pi_variant: Option<XiPiVariant>,
}

#[derive(Debug, Serialize)]
pub struct Verification {
    pub gate: GateInfo,
    pub checks: Vec<CheckResult>,
    pub fidelity: f64,
    pub phase_distance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_pi_variant: Option<XiPiVariant>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub config: RunConfig,
    pub seed: u64,
    #[serde(flatten)]
    pub result: Verification,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub kind: GateKind,
    pub xi: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<f64>,
    pub fidelity: f64,
    pub phase_distance: f64,
    pub cyclic_residual: f64,
    pub parallel_transport_residual: f64,
    pub dfs_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub config: RunConfig,
    pub rows: Vec<SweepRow>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoiseRow {
    pub strength: f64,
    pub encoded_fidelity: f64,
    pub baseline_fidelity: f64,
}

#[derive(Debug, Serialize)]
pub struct NoiseResult {
    pub gate: GateInfo,
    pub model: hqc_core::NoiseModel,
    pub seed: u64,
    pub samples: usize,
    pub input: Vec<Complex>,
    pub rows: Vec<NoiseRow>,
    pub encoded_min_fidelity: f64,
    pub baseline_monotone: bool,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct NoiseReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub config: RunConfig,
    #[serde(flatten)]
    pub result: NoiseResult,
}

#[derive(Debug, Serialize)]
pub struct AllReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub config: RunConfig,
    pub verifications: Vec<Verification>,
    pub noise: NoiseResult,
    pub pass: bool,
}

/// CSV header shared by sweep tables; `schema_version` leads every row.
pub const SWEEP_COLUMNS: [&str; 15] = [
    "schema_version",
    "kind",
    "xi",
    "gamma",
    "alpha",
    "beta",
    "delta",
    "theta",
    "eta",
    "fidelity",
    "phase_distance",
    "cyclic_residual",
    "parallel_transport_residual",
    "dfs_residual",
    "pass",
];

pub const NOISE_COLUMNS: [&str; 4] = ["schema_version", "strength", "encoded_fidelity", "baseline_fidelity"];

/// Shortest round-trip rendering; exponent form outside [1e-4, 1e15).
pub fn number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            SCHEMA_VERSION.to_string(),
            r.kind.to_string(),
            cell(r.xi),
            cell(r.gamma),
            cell(r.alpha),
            cell(r.beta),
            cell(r.delta),
            cell(r.theta),
            cell(r.eta),
            number(r.fidelity),
            number(r.phase_distance),
            number(r.cyclic_residual),
            number(r.parallel_transport_residual),
            number(r.dfs_residual),
            r.pass.to_string(),
        ])?;
    }
    finish(w)
}

pub fn noise_csv(rows: &[NoiseRow]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(NOISE_COLUMNS)?;
    for r in rows {
        w.write_record([
            SCHEMA_VERSION.to_string(),
            number(r.strength),
            number(r.encoded_fidelity),
            number(r.baseline_fidelity),
        ])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> csv::Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
