//! Residual-based checks of the holonomy conditions, DFS invariance and gate
//! equivalence. All residuals are entrywise max-norms.

use serde::{Deserialize, Serialize};

use crate::dfs::Subspace;
use crate::eigen::hermitian_eig;
use crate::error::{Error, Result};
use crate::gates::{GateInstance, GateKind};
use crate::linalg::{ComplexMatrix, Tolerances, C64};

pub const CHECK_UNITARITY: &str = "unitarity";
pub const CHECK_CYCLIC: &str = "cyclic";
pub const CHECK_PARALLEL_TRANSPORT: &str = "parallel_transport";
pub const CHECK_DFS_INVARIANCE: &str = "dfs_invariance";
pub const CHECK_GATE_FIDELITY: &str = "gate_fidelity";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyCheckConfig {
    pub n_time_samples: usize,
    pub tolerance: f64,
}

impl Default for HolonomyCheckConfig {
    fn default() -> Self {
        Self {
            n_time_samples: 64,
            tolerance: 1e-8,
        }
    }
}

impl HolonomyCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_time_samples < 2 {
            return Err(Error::InvalidConfig("n_time_samples must be at least 2".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

fn check_ambient(op: &ComplexMatrix, s: &Subspace, name: &'static str) -> Result<()> {
    if !op.is_square() || op.rows() != s.ambient_dim {
        return Err(Error::DimensionMismatch {
            op: name,
            left: op.shape(),
            right: (s.ambient_dim, s.dim()),
        });
    }
    Ok(())
}

/// `‖U P U† − P‖_max` with `P` the subspace projector: zero iff the subspace
/// returns to itself after the evolution.
pub fn check_cyclic(u: &ComplexMatrix, s: &Subspace) -> Result<f64> {
    check_ambient(u, s, "check_cyclic")?;
    let moved = u.matmul(&s.basis)?;
    let p_moved = moved.matmul(&moved.dagger())?;
    p_moved.distance_max(&s.projector())
}

/// `max_{t, m, l} |⟨ψ_m(t)|H|ψ_l(t)⟩|` over `n_time_samples` uniform times in
/// `[0, τ]`, with `ψ_m(t) = exp(-iHt) ψ_m(0)`.
pub fn check_parallel_transport(
    h: &ComplexMatrix,
    s: &Subspace,
    tau: f64,
    config: &HolonomyCheckConfig,
) -> Result<f64> {
    config.validate()?;
    check_ambient(h, s, "check_parallel_transport")?;
    let spectrum = hermitian_eig(h)?;
    let steps = config.n_time_samples - 1;
    let mut worst = 0.0f64;
    for k in 0..=steps {
        let t = tau * k as f64 / steps as f64;
        let psi = spectrum.propagate_columns(t, &s.basis)?;
        let dynamical = psi.dagger().matmul(&h.matmul(&psi)?)?;
        worst = worst.max(dynamical.norm_max());
    }
    Ok(worst)
}

/// `‖(I − P) H P‖_max`: zero iff `H` maps the subspace into itself.
pub fn check_dfs_invariance(h: &ComplexMatrix, d: &Subspace) -> Result<f64> {
    check_ambient(h, d, "check_dfs_invariance")?;
    let hp = h.matmul(&d.basis)?;
    let inside = d.basis.matmul(&d.basis.dagger().matmul(&hp)?)?;
    hp.distance_max(&inside)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateFidelity {
    /// `|Tr(V†U)| / d`.
    pub fidelity: f64,
    /// `‖U − e^{iφ}V‖_max` with `φ = arg Tr(V†U)`.
    pub phase_distance: f64,
    /// False when either input fails the default unitarity tolerance.
    pub inputs_unitary: bool,
}

/// Global-phase-insensitive comparison of two gates.
pub fn gate_fidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<GateFidelity> {
    if !u.is_square() || u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            op: "gate_fidelity",
            left: u.shape(),
            right: v.shape(),
        });
    }
    let d = u.rows() as f64;
    let overlap = v.dagger().matmul(u)?.trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let tol = Tolerances::default().unit;
    Ok(GateFidelity {
        fidelity: (overlap.norm() / d).min(1.0),
        phase_distance: u.distance_max(&v.scale(phase))?,
        inputs_unitary: u.is_unitary(tol) && v.is_unitary(tol),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            // NaN residuals fail.
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: GateKind,
    pub checks: Vec<CheckResult>,
    pub fidelity: f64,
    pub phase_distance: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Unitarity, both holonomy conditions, DFS invariance and fidelity against
/// the analytic target, each compared with `config.tolerance`.
pub fn verify_gate(instance: &GateInstance, config: &HolonomyCheckConfig) -> Result<VerificationReport> {
    config.validate()?;
    let tol = config.tolerance;
    let logical = instance.logical_subspace()?;
    let dfs = instance.dfs_subspace()?;
    let fid = gate_fidelity(&instance.u_logical, &instance.target)?;
    let checks = vec![
        CheckResult::new(CHECK_UNITARITY, instance.u_physical.unitarity_residual(), tol),
        CheckResult::new(CHECK_CYCLIC, check_cyclic(&instance.u_physical, &logical)?, tol),
        CheckResult::new(
            CHECK_PARALLEL_TRANSPORT,
            check_parallel_transport(&instance.hamiltonian, &logical, instance.tau, config)?,
            tol,
        ),
        CheckResult::new(
            CHECK_DFS_INVARIANCE,
            check_dfs_invariance(&instance.hamiltonian, &dfs)?,
            tol,
        ),
        CheckResult::new(CHECK_GATE_FIDELITY, 1.0 - fid.fidelity, tol),
    ];
    Ok(VerificationReport {
        kind: instance.kind,
        checks,
        fidelity: fid.fidelity,
        phase_distance: fid.phase_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfs::{standard_encoding, weight_subspace};
    use crate::frame::Frame;
    use crate::gates::{cnot, make_gate, FredkinParams, GateBuilder, GateParams, GateSettings};
    use crate::pauli::{embed, PauliKind};

    fn cnot_instance() -> GateInstance {
        make_gate(GateKind::Cnot, GateSettings::Controlled(GateParams::cnot(1.0)), None).unwrap()
    }

    #[test]
    fn identity_is_trivially_cyclic() {
        let s = weight_subspace(4, 2).unwrap();
        assert_eq!(check_cyclic(&ComplexMatrix::identity(16), &s).unwrap(), 0.0);
    }

    #[test]
    fn ancilla_swap_breaks_cyclicity() {
        // Swap |0101⟩ (logical 00) with the ancilla |0011⟩.
        let mut u = ComplexMatrix::identity(16);
        let (a, b) = (0b0101, 0b0011);
        u[(a, a)] = C64::new(0.0, 0.0);
        u[(b, b)] = C64::new(0.0, 0.0);
        u[(a, b)] = C64::new(1.0, 0.0);
        u[(b, a)] = C64::new(1.0, 0.0);
        let s = standard_encoding(2).unwrap().logical_subspace().unwrap();
        assert!((check_cyclic(&u, &s).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_z_is_not_geometric() {
        let z = embed(PauliKind::Z, 1, 1).unwrap();
        let s = Subspace::from_indices(&Frame::full(1).unwrap(), &[0]).unwrap();
        let r = check_parallel_transport(&z, &s, 1.0, &HolonomyCheckConfig::default()).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weight_changing_term_leaves_dfs() {
        let x1 = embed(PauliKind::X, 1, 4).unwrap();
        let d = weight_subspace(4, 2).unwrap();
        assert!((check_dfs_invariance(&x1, &d).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_basics() {
        let cx = cnot();
        let f = gate_fidelity(&cx, &cx).unwrap();
        assert_eq!(f.fidelity, 1.0);
        assert_eq!(f.phase_distance, 0.0);
        let phased = cx.scale(C64::from_polar(1.0, 1.234));
        let f = gate_fidelity(&phased, &cx).unwrap();
        assert!((f.fidelity - 1.0).abs() < 1e-15);
        assert!(f.phase_distance < 1e-15);
        let f = gate_fidelity(&cx, &ComplexMatrix::identity(4)).unwrap();
        assert!((f.fidelity - 0.5).abs() < 1e-15);
        assert!(gate_fidelity(&cx, &ComplexMatrix::identity(2)).is_err());
        let f = gate_fidelity(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::identity(2)).unwrap();
        assert!(!f.inputs_unitary);
    }

    #[test]
    fn cnot_passes_every_check() {
        let r = verify_gate(&cnot_instance(), &HolonomyCheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn fredkin_passes_every_check() {
        let g = make_gate(
            GateKind::Fredkin,
            GateSettings::Fredkin(FredkinParams::new(1.3).unwrap()),
            None,
        )
        .unwrap();
        let r = verify_gate(&g, &HolonomyCheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn perturbed_hamiltonian_fails_dfs_invariance() {
        let g = GateBuilder::new(GateKind::Cnot, GateSettings::Controlled(GateParams::cnot(1.0)))
            .perturb(1e-3)
            .build()
            .unwrap();
        let r = verify_gate(&g, &HolonomyCheckConfig::default()).unwrap();
        let dfs = r.check(CHECK_DFS_INVARIANCE).unwrap();
        assert!(!dfs.pass);
        assert!((dfs.residual - 1e-3).abs() < 1e-12);
        assert!(!r.passed());
    }

    #[test]
    fn config_validation() {
        let bad = HolonomyCheckConfig {
            n_time_samples: 1,
            tolerance: 1e-8,
        };
        assert!(verify_gate(&cnot_instance(), &bad).is_err());
    }
}
