use std::fmt::Write as _;

use hqc_core::gates::{cnot, GateBuilder};
use hqc_core::linalg::format_complex;
use hqc_core::verify::{CHECK_CYCLIC, CHECK_DFS_INVARIANCE, CHECK_PARALLEL_TRANSPORT};
use hqc_core::{
    baseline_cnot_fidelity, gate_fidelity, noisy_gate_fidelity, verify_gate, ComplexMatrix, FredkinParams,
    GateInstance, GateKind, GateParams, GateSettings, HolonomyCheckConfig, Placement, C64,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::FormatArg;
use crate::config::{CommandName, PhasePair, RunConfig, Runtime};
use crate::error::{CliError, CliResult};
use crate::report::*;

/// Rendered report plus whether every physics check passed.
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))
}

fn pool(rt: &Runtime) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(rt.workers)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn controlled(cfg: &RunConfig, pair: &PhasePair, a: f64, b: f64, alpha: f64, beta: f64) -> CliResult<GateSettings> {
    let p = match pair {
        PhasePair::XiGamma { .. } => GateParams::new(cfg.omega, a, b, alpha, beta)?,
        PhasePair::DeltaTheta { .. } => GateParams::from_phases(cfg.omega, a, b, alpha, beta)?,
    };
    Ok(GateSettings::Controlled(p))
}

/// Gate settings for every grid point, first axis outermost.
fn grid_settings(cfg: &RunConfig) -> CliResult<Vec<GateSettings>> {
    let Some(spec) = &cfg.angles else {
        return cfg
            .eta
            .iter()
            .map(|&eta| Ok(GateSettings::Fredkin(FredkinParams::new(eta)?)))
            .collect();
    };
    let [first, second, alpha, beta] = spec.axes();
    let mut out = Vec::with_capacity(first.len() * second.len() * alpha.len() * beta.len());
    for &a in first {
        for &b in second {
            for &al in alpha {
                for &be in beta {
                    out.push(controlled(cfg, &spec.pair, a, b, al, be)?);
                }
            }
        }
    }
    Ok(out)
}

fn build(cfg: &RunConfig, kind: GateKind, settings: GateSettings, placement: Placement) -> CliResult<GateInstance> {
    Ok(GateBuilder::new(kind, settings)
        .placement(placement)
        .perturb(cfg.perturb)
        .pulse_scale(cfg.pulse_scale)
        .build()?)
}

fn single_gate(cfg: &RunConfig) -> CliResult<GateInstance> {
    let settings = grid_settings(cfg)?[0];
    build(cfg, cfg.kind, settings, cfg.placement()?)
}

fn holonomy_config(cfg: &RunConfig) -> HolonomyCheckConfig {
    HolonomyCheckConfig {
        tolerance: cfg.tolerance,
        ..HolonomyCheckConfig::default()
    }
}

/// For the default CNOT: the ξ = π reading of the CNOT angles realizes −I.
fn xi_pi_variant(g: &GateInstance) -> CliResult<Option<XiPiVariant>> {
    let GateSettings::Controlled(p) = g.settings else {
        return Ok(None);
    };
    if g.kind != GateKind::Cnot || g.placement != Placement::default_for(2) {
        return Ok(None);
    }
    let xi_pi = GateParams::cnot_with_xi_pi(p.omega);
    let g_pi = GateBuilder::new(GateKind::C1u, GateSettings::Controlled(xi_pi)).build()?;
    let block = g_pi.realized_block().expect("default placement has a target block");
    Ok(Some(XiPiVariant {
        xi: xi_pi.xi,
        realized_block: matrix_rows(&block),
        distance_to_minus_identity: gate_fidelity(&block, &ComplexMatrix::identity(2).scale_real(-1.0))?.phase_distance,
        fidelity_vs_cnot: gate_fidelity(&g_pi.u_logical, &cnot())?.fidelity,
    }))
}

fn write_matrix(s: &mut String, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        let _ = writeln!(s, "  {}", row.join("  "));
    }
}

pub fn gate(cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    let g = single_gate(cfg)?;
    let fid = gate_fidelity(&g.u_logical, &g.target)?;
    let pass = fid.fidelity >= 1.0 - cfg.tolerance;
    let variant = xi_pi_variant(&g)?;
    let body = match rt.format {
        FormatArg::Json => json(&GateReport {
            schema_version: SCHEMA_VERSION,
            generator: Generator::current(),
            config: cfg.clone(),
            gate: GateInfo::of(&g),
            u_logical: matrix_rows(&g.u_logical),
            target: matrix_rows(&g.target),
            fidelity: fid.fidelity,
            phase_distance: fid.phase_distance,
            tolerance: cfg.tolerance,
            pass,
            xi_pi_variant: variant,
        })?,
        _ => {
            let mut s = String::new();
            let info = GateInfo::of(&g);
            let _ = writeln!(
                s,
                "gate {} on logical roles {:?} of {} ({} physical qubits)",
                g.kind, info.placement, info.n_logical, info.n_physical
            );
            if let (Some(d), Some(t)) = (info.delta, info.theta) {
                let _ = writeln!(s, "delta = {d:.6}  theta = {t:.6}");
            }
            let _ = writeln!(s, "pulse area = {:.6}  tau = {:.6}", g.pulse_area, g.tau);
            let _ = writeln!(s, "U_logical =");
            write_matrix(&mut s, &g.u_logical);
            let _ = writeln!(s, "target =");
            write_matrix(&mut s, &g.target);
            let _ = writeln!(s, "F = {:.6}", fid.fidelity);
            let _ = writeln!(s, "phase distance = {:.3e}", fid.phase_distance);
            if let Some(e) = &variant {
                let _ = writeln!(
                    s,
                    "note: xi = pi realizes the target block below (distance to -I {:.3e}, F vs CNOT {:.6})",
                    e.distance_to_minus_identity, e.fidelity_vs_cnot
                );
                for row in &e.realized_block {
                    let cells: Vec<String> = row.iter().map(|z| format_complex(C64::new(z.re, z.im))).collect();
                    let _ = writeln!(s, "  {}", cells.join("  "));
                }
            }
            let _ = write!(
                s,
                "{} (tolerance {:e})",
                if pass { "PASS" } else { "FAIL" },
                cfg.tolerance
            );
            s
        }
    };
    Ok(Outcome { body, pass })
}

fn verification(cfg: &RunConfig, g: &GateInstance) -> CliResult<Verification> {
    let r = verify_gate(g, &holonomy_config(cfg))?;
    Ok(Verification {
        gate: GateInfo::of(g),
        pass: r.passed(),
        checks: r.checks,
        fidelity: r.fidelity,
        phase_distance: r.phase_distance,
        xi_pi_variant: xi_pi_variant(g)?,
    })
}

fn verification_text(s: &mut String, v: &Verification) {
    let _ = writeln!(s, "{} {:?}", v.gate.kind, v.gate.placement);
    for c in &v.checks {
        let _ = writeln!(
            s,
            "  {:<20} {:>10.3e}  <= {:.1e}  {}",
            c.name,
            c.residual,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(s, "  F = {:.6}  phase distance = {:.3e}", v.fidelity, v.phase_distance);
}

pub fn verify(cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    let g = single_gate(cfg)?;
    let result = verification(cfg, &g)?;
    let pass = result.pass;
    let body = match rt.format {
        FormatArg::Text => {
            let mut s = String::new();
            verification_text(&mut s, &result);
            s.push_str(if pass { "PASS" } else { "FAIL" });
            s
        }
        _ => json(&VerifyReport {
            schema_version: SCHEMA_VERSION,
            generator: Generator::current(),
            config: cfg.clone(),
            seed: cfg.noise.seed,
            result,
        })?,
    };
    Ok(Outcome { body, pass })
}

fn sweep_row(cfg: &RunConfig, settings: GateSettings) -> CliResult<SweepRow> {
    let g = build(cfg, cfg.kind, settings, cfg.placement()?)?;
    let r = verify_gate(&g, &holonomy_config(cfg))?;
    let residual = |name| r.check(name).map_or(f64::NAN, |c| c.residual);
    let info = GateInfo::of(&g);
    Ok(SweepRow {
        kind: g.kind,
        xi: info.xi,
        gamma: info.gamma,
        alpha: info.alpha,
        beta: info.beta,
        delta: info.delta,
        theta: info.theta,
        eta: info.eta,
        fidelity: r.fidelity,
        phase_distance: r.phase_distance,
        cyclic_residual: residual(CHECK_CYCLIC),
        parallel_transport_residual: residual(CHECK_PARALLEL_TRANSPORT),
        dfs_residual: residual(CHECK_DFS_INVARIANCE),
        pass: r.passed(),
    })
}

pub fn sweep(cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    let points = grid_settings(cfg)?;
    let rows: Vec<SweepRow> = pool(rt)?.install(|| {
        points
            .par_iter()
            .map(|&s| sweep_row(cfg, s))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let pass = rows.iter().all(|r| r.pass);
    let body = match rt.format {
        FormatArg::Json => json(&SweepReport {
            schema_version: SCHEMA_VERSION,
            generator: Generator::current(),
            config: cfg.clone(),
            rows,
            pass,
        })?,
        _ => sweep_csv(&rows).map_err(|e| CliError::Runtime(e.to_string()))?,
    };
    Ok(Outcome { body, pass })
}

fn logical_input(cfg: &RunConfig, n_logical: usize) -> Vec<C64> {
    let d = 1usize << n_logical;
    match &cfg.input {
        Some(bits) => {
            let index = usize::from_str_radix(bits, 2).expect("validated binary string");
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[index] = C64::new(1.0, 0.0);
            v
        }
        None => vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d],
    }
}

fn noise_result(cfg: &RunConfig, g: &GateInstance, rt: &Runtime) -> CliResult<NoiseResult> {
    let psi = logical_input(cfg, g.placement.n_logical());
    let rows: Vec<NoiseRow> = pool(rt)?.install(|| {
        cfg.noise
            .strengths
            .par_iter()
            .map(|&strength| {
                let nc = cfg.noise.at(strength);
                Ok(NoiseRow {
                    strength,
                    encoded_fidelity: noisy_gate_fidelity(g, &psi, &nc)?,
                    baseline_fidelity: baseline_cnot_fidelity(cfg.coupling(), &nc)?,
                })
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let encoded_min = rows.iter().map(|r| r.encoded_fidelity).fold(f64::INFINITY, f64::min);
    let mut by_strength = rows.clone();
    by_strength.sort_by(|a, b| a.strength.total_cmp(&b.strength));
    let baseline_monotone = by_strength
        .windows(2)
        .all(|w| w[1].baseline_fidelity <= w[0].baseline_fidelity + 1e-12);
    Ok(NoiseResult {
        gate: GateInfo::of(g),
        model: cfg.noise.model,
        seed: cfg.noise.seed,
        samples: cfg.noise.samples,
        input: psi.into_iter().map(Complex::from).collect(),
        pass: encoded_min >= 1.0 - cfg.tolerance,
        rows,
        encoded_min_fidelity: encoded_min,
        baseline_monotone,
        tolerance: cfg.tolerance,
    })
}

pub fn noise(cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    let g = single_gate(cfg)?;
    let result = noise_result(cfg, &g, rt)?;
    let pass = result.pass;
    let body = match rt.format {
        FormatArg::Csv => noise_csv(&result.rows).map_err(|e| CliError::Runtime(e.to_string()))?,
        _ => json(&NoiseReport {
            schema_version: SCHEMA_VERSION,
            generator: Generator::current(),
            config: cfg.clone(),
            result,
        })?,
    };
    Ok(Outcome { body, pass })
}

pub fn all(cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    let mut verifications = Vec::new();
    for kind in GateKind::ALL {
        let settings = match kind {
            GateKind::Fredkin => GateSettings::Fredkin(FredkinParams::new(cfg.eta[0])?),
            _ => GateSettings::Controlled(GateParams::cnot(cfg.omega)),
        };
        let g = build(cfg, kind, settings, Placement::default_for(kind.arity()))?;
        verifications.push(verification(cfg, &g)?);
    }
    let noisy_cfg = RunConfig {
        tolerance: cfg.tolerance.max(1e-6),
        ..cfg.clone()
    };
    let g = build(
        cfg,
        GateKind::Cnot,
        GateSettings::Controlled(GateParams::cnot(cfg.omega)),
        Placement::default_for(2),
    )?;
    let noise = noise_result(&noisy_cfg, &g, rt)?;
    let pass = verifications.iter().all(|v| v.pass) && noise.pass;
    let body = match rt.format {
        FormatArg::Text => {
            let mut s = String::new();
            for v in &verifications {
                verification_text(&mut s, v);
            }
            let _ = writeln!(s, "noise ({:?}, seed {}):", noise.model, noise.seed);
            for r in &noise.rows {
                let _ = writeln!(
                    s,
                    "  strength {:<8} encoded F = {:.9}  bare F = {:.6}",
                    r.strength, r.encoded_fidelity, r.baseline_fidelity
                );
            }
            s.push_str(if pass { "PASS" } else { "FAIL" });
            s
        }
        _ => json(&AllReport {
            schema_version: SCHEMA_VERSION,
            generator: Generator::current(),
            config: cfg.clone(),
            verifications,
            noise,
            pass,
        })?,
    };
    Ok(Outcome { body, pass })
}

pub fn run(command: CommandName, cfg: &RunConfig, rt: &Runtime) -> CliResult<Outcome> {
    match command {
        CommandName::Gate => gate(cfg, rt),
        CommandName::Verify => verify(cfg, rt),
        CommandName::Sweep => sweep(cfg, rt),
        CommandName::Noise => noise(cfg, rt),
        CommandName::All => all(cfg, rt),
    }
}
