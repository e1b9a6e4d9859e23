use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{gate_frame, h1_expr, h2_expr, h3_expr, placement_ancillas, Placement};
use super::params::{phase_angles, FredkinParams, GateParams, PhaseAngles};
use super::target::{place_logical_gate, target_c1u, target_c2u, target_fredkin, target_u_from};
use crate::dfs::{standard_encoding, DfsEncoding, Subspace};
use crate::eigen::hermitian_eig;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{ComplexMatrix, C64};
use crate::pauli::{OperatorExpr, PauliKind};

/// Registers up to this many physical qubits are simulated on the full space.
pub const FULL_FRAME_LIMIT: usize = 6;

const CONSISTENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    C1u,
    Cnot,
    C2u,
    Toffoli,
    Fredkin,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::C1u,
        GateKind::Cnot,
        GateKind::C2u,
        GateKind::Toffoli,
        GateKind::Fredkin,
    ];

    /// Number of logical roles.
    pub fn arity(self) -> usize {
        match self {
            GateKind::C1u | GateKind::Cnot => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::C1u => "c1u",
            GateKind::Cnot => "cnot",
            GateKind::C2u => "c2u",
            GateKind::Toffoli => "toffoli",
            GateKind::Fredkin => "fredkin",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown gate kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateSettings {
    Controlled(GateParams),
    Fredkin(FredkinParams),
}

impl GateSettings {
    /// Pulse area (Ωτ or ητ) and duration for a given pulse scale.
    fn pulse(&self, scale: f64) -> (f64, f64) {
        match self {
            GateSettings::Controlled(p) => {
                let tau = p.pulse_time() * scale;
                (p.omega * tau, tau)
            }
            GateSettings::Fredkin(p) => {
                let tau = p.pulse_time() * scale;
                (p.eta * tau, tau)
            }
        }
    }
}

/// Pulse condition fixing the evolution period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pulse {
    /// Ωτ = π.
    OmegaPi { omega: f64 },
    /// ητ = π/√2.
    EtaPiOverSqrt2 { eta: f64 },
}

impl Pulse {
    pub fn duration(self) -> f64 {
        match self {
            Pulse::OmegaPi { omega } => std::f64::consts::PI / omega,
            Pulse::EtaPiOverSqrt2 { eta } => std::f64::consts::PI / (std::f64::consts::SQRT_2 * eta),
        }
    }
}

/// `exp(-iHτ)` with τ solved from the pulse condition.
pub fn run_gate(h: &ComplexMatrix, pulse: Pulse) -> Result<ComplexMatrix> {
    crate::eigen::evolve(h, pulse.duration())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrameMode {
    /// Full space up to [`FULL_FRAME_LIMIT`] physical qubits, closure beyond.
    #[default]
    Auto,
    Full,
    Closure,
}

/// A gate evolution with every intermediate kept for reporting. Matrices
/// are expressed in `frame` coordinates.
#[derive(Debug, Clone)]
pub struct GateInstance {
    pub kind: GateKind,
    pub settings: GateSettings,
    pub placement: Placement,
    pub encoding: DfsEncoding,
    /// Named ancilla states of this placement (physical indices).
    pub ancillas: Vec<(String, usize)>,
    pub frame: Frame,
    pub hamiltonian: ComplexMatrix,
    pub tau: f64,
    pub pulse_area: f64,
    pub perturbation: f64,
    pub u_physical: ComplexMatrix,
    pub u_logical: ComplexMatrix,
    pub target: ComplexMatrix,
    pub phases: Option<PhaseAngles>,
}

impl GateInstance {
    pub fn logical_subspace(&self) -> Result<Subspace> {
        self.encoding.logical_subspace_in(&self.frame)
    }

    /// Logical states plus the placement's ancillas: the protected subspace
    /// the gate evolution must stay inside.
    pub fn dfs_subspace(&self) -> Result<Subspace> {
        Subspace::from_indices(&self.frame, &self.protected_states())
    }

    pub fn protected_states(&self) -> Vec<usize> {
        let mut v = self.encoding.logical_to_physical.clone();
        v.extend(self.ancillas.iter().map(|(_, i)| *i));
        v
    }

    /// The 2×2 single-qubit gate of the analytic target (controlled kinds).
    pub fn single_qubit_target(&self) -> Option<ComplexMatrix> {
        match (self.settings, self.phases) {
            (GateSettings::Controlled(p), Some(ph)) => Some(target_u_from(&ph, p.alpha, p.beta)),
            _ => None,
        }
    }

    /// The realized 2×2 block acting on the target when all controls are |1⟩_L
    /// (default placements only).
    pub fn realized_block(&self) -> Option<ComplexMatrix> {
        if self.kind == GateKind::Fredkin || self.placement != Placement::default_for(self.kind.arity()) {
            return None;
        }
        let d = self.u_logical.rows();
        Some(self.u_logical.select(&[d - 2, d - 1], &[d - 2, d - 1]))
    }
}

#[derive(Debug, Clone)]
pub struct GateBuilder {
    kind: GateKind,
    settings: GateSettings,
    placement: Option<Placement>,
    perturbation: f64,
    pulse_scale: f64,
    frame_mode: FrameMode,
}

impl GateBuilder {
    pub fn new(kind: GateKind, settings: GateSettings) -> Self {
        Self {
            kind,
            settings,
            placement: None,
            perturbation: 0.0,
            pulse_scale: 1.0,
            frame_mode: FrameMode::Auto,
        }
    }

    pub fn placement(mut self, placement: Placement) -> Self {
        self.placement = Some(placement);
        self
    }

    /// Adds `ε·X₁` on physical qubit 1 (negative control; breaks weight
    /// conservation, so it requires the full frame).
    pub fn perturb(mut self, eps: f64) -> Self {
        self.perturbation = eps;
        self
    }

    /// Multiplies the evolution time (1.0 is the holonomic pulse).
    pub fn pulse_scale(mut self, scale: f64) -> Self {
        self.pulse_scale = scale;
        self
    }

    pub fn frame_mode(mut self, mode: FrameMode) -> Self {
        self.frame_mode = mode;
        self
    }

    fn check_consistency(&self) -> Result<()> {
        match (self.kind, &self.settings) {
            (GateKind::Fredkin, GateSettings::Fredkin(_)) => Ok(()),
            (GateKind::Fredkin, _) => Err(Error::InconsistentParams("fredkin needs an eta coupling".into())),
            (_, GateSettings::Fredkin(_)) => Err(Error::InconsistentParams(format!(
                "{} needs controlled-U angles",
                self.kind
            ))),
            (GateKind::Cnot | GateKind::Toffoli, GateSettings::Controlled(p)) => {
                let ok = (p.alpha - std::f64::consts::FRAC_PI_2).abs() < CONSISTENCY_TOL
                    && p.beta.abs() < CONSISTENCY_TOL
                    && p.gamma.abs() < CONSISTENCY_TOL
                    && (p.xi.sin() - 1.0).abs() < CONSISTENCY_TOL;
                if ok {
                    Ok(())
                } else {
                    Err(Error::InconsistentParams(format!(
                        "{} requires alpha = pi/2, beta = 0, gamma = 0, sin(xi) = 1",
                        self.kind
                    )))
                }
            }
            _ => Ok(()),
        }
    }

    fn hamiltonian_expr(&self, placement: &Placement) -> Result<OperatorExpr> {
        match (self.kind, &self.settings) {
            (GateKind::C1u | GateKind::Cnot, GateSettings::Controlled(p)) => h1_expr(p, placement),
            (GateKind::C2u | GateKind::Toffoli, GateSettings::Controlled(p)) => h2_expr(p, placement),
            (GateKind::Fredkin, GateSettings::Fredkin(p)) => h3_expr(p, placement),
            _ => unreachable!("checked by check_consistency"),
        }
    }

    pub fn build(self) -> Result<GateInstance> {
        self.check_consistency()?;
        if !(self.pulse_scale.is_finite() && self.pulse_scale >= 0.0) {
            return Err(Error::InvalidConfig("pulse scale must be non-negative".into()));
        }
        let placement = self
            .placement
            .clone()
            .unwrap_or_else(|| Placement::default_for(self.kind.arity()));
        if placement.arity() != self.kind.arity() {
            return Err(Error::InvalidPlacement(format!(
                "{} takes {} logical roles",
                self.kind,
                self.kind.arity()
            )));
        }
        let n_logical = placement.n_logical();
        let encoding = standard_encoding(n_logical)?;
        let ancillas = placement_ancillas(&placement);

        let mut expr = self.hamiltonian_expr(&placement)?;
        if self.perturbation != 0.0 {
            let n = expr.n_qubits();
            expr = &expr + &OperatorExpr::single(n, 1, PauliKind::X, C64::new(self.perturbation, 0.0));
        }

        let mut seeds = encoding.logical_to_physical.clone();
        seeds.extend(ancillas.iter().map(|(_, i)| *i));
        let frame = match self.frame_mode {
            FrameMode::Auto => gate_frame(&expr, &seeds, FULL_FRAME_LIMIT)?,
            FrameMode::Full => Frame::full(expr.n_qubits())?,
            FrameMode::Closure => gate_frame(&expr, &seeds, 0)?,
        };
        let hamiltonian = expr.compile_in(&frame)?;

        let (pulse_area, tau) = self.settings.pulse(self.pulse_scale);
        let u_physical = hermitian_eig(&hamiltonian)?.propagator(tau);
        let u_logical = encoding.extract_logical_in(&frame, &u_physical)?;

        let (base_target, phases) = match (self.kind, &self.settings) {
            (GateKind::Fredkin, _) => (target_fredkin(), None),
            (kind, GateSettings::Controlled(p)) => {
                let ph = phase_angles(p);
                let u = target_u_from(&ph, p.alpha, p.beta);
                let t = if kind.arity() == 2 {
                    target_c1u(&u)?
                } else {
                    target_c2u(&u)?
                };
                (t, Some(ph))
            }
            _ => unreachable!(),
        };
        let target = place_logical_gate(&base_target, placement.roles(), n_logical);

        Ok(GateInstance {
            kind: self.kind,
            settings: self.settings,
            placement,
            encoding,
            ancillas,
            frame,
            hamiltonian,
            tau,
            pulse_area,
            perturbation: self.perturbation,
            u_physical,
            u_logical,
            target,
            phases,
        })
    }
}

/// Builds, evolves and extracts one gate with the default pulse.
pub fn make_gate(kind: GateKind, settings: GateSettings, placement: Option<Placement>) -> Result<GateInstance> {
    let mut b = GateBuilder::new(kind, settings);
    if let Some(p) = placement {
        b = b.placement(p);
    }
    b.build()
}
