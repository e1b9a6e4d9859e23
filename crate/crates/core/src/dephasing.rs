//! Collective dephasing: a quasi-static random collective phase ensemble and a
//! Markovian master equation, both generated by `J = Σ_k Z_k`.
//!
//! The master equation integrated here is
//!
//! ```text
//! dρ/dt = −i[H, ρ] + κ (2JρJ − {J², ρ})
//! ```
//!
//! so a coherence between `J` eigenvalues `j_a` and `j_b` decays at rate
//! `κ (j_a − j_b)²`. A single-qubit `|+⟩` coherence therefore decays as
//! `e^{−4κt}`, matching a Gaussian phase ensemble of variance `2κt`.
//!
//! Because `J` is diagonal in the computational basis, both models work on
//! any [`Frame`]; the gate-level helpers restrict the problem to the basis
//! states reachable from the input, which is exact.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{evolve, hermitian_eig};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::gates::GateInstance;
use crate::linalg::{inner, ComplexMatrix, C64, I, ZERO};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x00D1_5EA5_E5EE_D001;
pub const DEFAULT_SAMPLES: usize = 512;
/// Default number of RK4 steps per gate period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 2000;
/// Allowed change between a run and its half-step rerun.
pub const STEP_DOUBLING_TOL: f64 = 1e-8;
/// Trace or positivity drift that marks the integration as unstable.
pub const DRIFT_TOL: f64 = 1e-6;
const MAX_REFINEMENTS: usize = 6;

const DM_HERM_TOL: f64 = 1e-9;
const DM_TRACE_TOL: f64 = 1e-9;
const DM_EIG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    #[serde(rename = "ensemble")]
    PhaseEnsemble,
    Lindblad,
}

/// How ensemble members are summed. Only `Sequential` is bit-reproducible;
/// `Parallel` agrees with it to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    #[default]
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub model: NoiseModel,
    /// Phase standard deviation (ensemble, radians) or rate κ (Lindblad).
    pub strength: f64,
    pub n_samples: usize,
    /// RK4 step; `None` means one gate period over [`DEFAULT_STEPS_PER_PERIOD`].
    pub dt: Option<f64>,
    pub seed: u64,
    pub reduction: Reduction,
}

impl NoiseConfig {
    pub fn lindblad(kappa: f64) -> Self {
        Self {
            model: NoiseModel::Lindblad,
            strength: kappa,
            n_samples: DEFAULT_SAMPLES,
            dt: None,
            seed: DEFAULT_SEED,
            reduction: Reduction::Sequential,
        }
    }

    pub fn ensemble(sigma: f64) -> Self {
        Self {
            model: NoiseModel::PhaseEnsemble,
            ..Self::lindblad(sigma)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strength.is_finite() && self.strength >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "noise strength must be finite and non-negative, got {}",
                self.strength
            )));
        }
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }

    fn step_for(&self, period: f64) -> f64 {
        self.dt.unwrap_or(period / DEFAULT_STEPS_PER_PERIOD as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                op: "DensityMatrix::new",
                left: m.shape(),
                right: (m.cols(), m.rows()),
            });
        }
        let herm = m.hermiticity_residual();
        if herm > DM_HERM_TOL {
            return Err(Error::NotHermitian {
                residual: herm,
                tol: DM_HERM_TOL,
            });
        }
        let trace = m.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > DM_TRACE_TOL {
            return Err(Error::InvalidConfig(format!("density matrix trace {trace} is not 1")));
        }
        let min_eig = hermitian_eig(&m)?.eigenvalues[0];
        if min_eig < -DM_EIG_TOL {
            return Err(Error::InvalidConfig(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = crate::linalg::norm(psi);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidConfig("cannot build a state from a zero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|a| a / n).collect();
        Ok(Self(ComplexMatrix::outer(&v, &v)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized `ψ`.
    pub fn fidelity_with_pure(&self, psi: &[C64]) -> Result<f64> {
        let rho_psi = self.0.matvec(psi)?;
        Ok(inner(psi, &rho_psi).re)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        Ok(Self(u.matmul(&self.0)?.matmul(&u.dagger())?))
    }
}

/// Eigenvalues of `J = Σ Z_k` on the full `n`-qubit space, deduced from a
/// power-of-two dimension.
fn full_space_j(dim: usize) -> Result<Vec<f64>> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidConfig(format!("dimension {dim} is not a qubit register")));
    }
    Ok(Frame::full(dim.trailing_zeros() as usize)?.collective_z_diagonal())
}

fn check_j(op: &'static str, rho: &DensityMatrix, j: &[f64]) -> Result<()> {
    if j.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            op,
            left: (rho.dim(), rho.dim()),
            right: (j.len(), 1),
        });
    }
    Ok(())
}

/// `n` phases drawn i.i.d. from `N(0, σ²)` with ChaCha8 seeded by `seed`.
pub fn sample_phases(sigma: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidConfig(format!("phase distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| normal.sample(&mut rng)).collect())
}

/// Sample mean of `e^{−iφ Δ}` over the given phases.
fn mean_phase_factor(phases: &[f64], delta: f64, reduction: Reduction) -> C64 {
    let term = |phi: &f64| C64::from_polar(1.0, -phi * delta);
    let sum: C64 = match reduction {
        Reduction::Sequential => phases.iter().map(term).sum(),
        Reduction::Parallel => phases.par_iter().map(term).sum(),
    };
    sum / phases.len() as f64
}

/// Ensemble average of `e^{−iφJ} ρ e^{iφJ}` on the full register.
pub fn collective_phase_channel(rho: &DensityMatrix, config: &NoiseConfig) -> Result<DensityMatrix> {
    let j = full_space_j(rho.dim())?;
    collective_phase_channel_with(rho, &j, config)
}

/// As [`collective_phase_channel`] with an explicit diagonal `J`.
///
/// Every sample multiplies `ρ_ab` by `e^{−iφ(j_a−j_b)}`, so the average is
/// applied per distinct `j_a − j_b`.
pub fn collective_phase_channel_with(rho: &DensityMatrix, j: &[f64], config: &NoiseConfig) -> Result<DensityMatrix> {
    config.validate()?;
    if config.model != NoiseModel::PhaseEnsemble {
        return Err(Error::InvalidConfig("phase channel needs the ensemble model".into()));
    }
    check_j("collective_phase_channel", rho, j)?;
    if config.strength == 0.0 {
        return Ok(rho.clone());
    }
    let phases = sample_phases(config.strength, config.n_samples, config.seed)?;
    let mut factors: Vec<(f64, C64)> = Vec::new();
    let mut out = rho.0.clone();
    let d = rho.dim();
    for a in 0..d {
        for b in 0..d {
            let delta = j[a] - j[b];
            if delta == 0.0 {
                continue;
            }
            let f = match factors.iter().find(|(k, _)| *k == delta) {
                Some(&(_, f)) => f,
                None => {
                    let f = mean_phase_factor(&phases, delta, config.reduction);
                    factors.push((delta, f));
                    f
                }
            };
            out[(a, b)] = rho.0[(a, b)] * f;
        }
    }
    Ok(DensityMatrix(out))
}

/// Right-hand side `−i[H, ρ] − κ (j_a − j_b)² ρ_ab`.
fn lindblad_rhs(h: &ComplexMatrix, j: &[f64], kappa: f64, rho: &ComplexMatrix) -> ComplexMatrix {
    let hr = h.matmul(rho).expect("square operands");
    let rh = rho.matmul(h).expect("square operands");
    let d = rho.rows();
    ComplexMatrix::from_fn(d, d, |a, b| {
        let dj = j[a] - j[b];
        -I * (hr[(a, b)] - rh[(a, b)]) - rho[(a, b)] * (kappa * dj * dj)
    })
}

fn lincomb(base: &ComplexMatrix, s: f64, k: &ComplexMatrix) -> ComplexMatrix {
    let mut out = base.clone();
    out.axpy(C64::new(s, 0.0), k).expect("same shape");
    out
}

fn rk4_run(rho0: &ComplexMatrix, h: &ComplexMatrix, j: &[f64], kappa: f64, t: f64, steps: usize) -> ComplexMatrix {
    let dt = t / steps as f64;
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = lindblad_rhs(h, j, kappa, &rho);
        let k2 = lindblad_rhs(h, j, kappa, &lincomb(&rho, dt / 2.0, &k1));
        let k3 = lindblad_rhs(h, j, kappa, &lincomb(&rho, dt / 2.0, &k2));
        let k4 = lindblad_rhs(h, j, kappa, &lincomb(&rho, dt, &k3));
        for (idx, r) in rho.entries_mut().iter_mut().enumerate() {
            let e = k1.entries()[idx] + (k2.entries()[idx] + k3.entries()[idx]) * 2.0 + k4.entries()[idx];
            *r += e * (dt / 6.0);
        }
    }
    rho
}

fn check_drift(rho: &ComplexMatrix) -> Result<()> {
    let trace_drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if trace_drift.is_nan() || trace_drift > DRIFT_TOL {
        return Err(Error::Integration(format!(
            "trace drifted by {trace_drift:e}; reduce dt"
        )));
    }
    let min_eig = hermitian_eig(&symmetrize(rho))?.eigenvalues[0];
    if min_eig < -DRIFT_TOL {
        return Err(Error::Integration(format!(
            "state lost positivity (eigenvalue {min_eig:e}); reduce dt"
        )));
    }
    Ok(())
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.dagger()).scale_real(0.5)
}

fn validate_lindblad(rho0: &DensityMatrix, h: &ComplexMatrix, kappa: f64, t: f64, dt: f64) -> Result<usize> {
    if h.shape() != (rho0.dim(), rho0.dim()) {
        return Err(Error::DimensionMismatch {
            op: "lindblad_rk4",
            left: (rho0.dim(), rho0.dim()),
            right: h.shape(),
        });
    }
    let herm = h.hermiticity_residual();
    let tol = crate::linalg::Tolerances::default().herm;
    if herm > tol {
        return Err(Error::NotHermitian { residual: herm, tol });
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::InvalidConfig(format!("rate must be non-negative, got {kappa}")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig(format!("time must be non-negative, got {t}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    Ok(((t / dt).ceil() as usize).max(1))
}

/// Classical RK4 on the full register with `J = Σ Z_k`. The step is shrunk
/// so that a whole number of steps spans `t`.
pub fn lindblad_rk4(rho0: &DensityMatrix, h: &ComplexMatrix, kappa: f64, t: f64, dt: f64) -> Result<DensityMatrix> {
    let j = full_space_j(rho0.dim())?;
    lindblad_rk4_with(rho0, h, &j, kappa, t, dt)
}

/// As [`lindblad_rk4`] with an explicit diagonal `J`.
pub fn lindblad_rk4_with(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    j: &[f64],
    kappa: f64,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    check_j("lindblad_rk4", rho0, j)?;
    let steps = validate_lindblad(rho0, h, kappa, t, dt)?;
    let rho = rk4_run(&rho0.0, h, j, kappa, t, steps);
    check_drift(&rho)?;
    Ok(DensityMatrix(rho))
}

/// Outcome of a step-doubling integration.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedEvolution {
    pub state: DensityMatrix,
    /// Step of the accepted (finer) run.
    pub dt: f64,
    /// `‖ρ_dt − ρ_{dt/2}‖_max` of the accepted pair.
    pub step_doubling_delta: f64,
}

/// Runs at `dt` and `dt/2`, halving further (a few times at most) until the
/// two agree within [`STEP_DOUBLING_TOL`].
pub fn lindblad_rk4_checked(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    j: &[f64],
    kappa: f64,
    t: f64,
    dt: f64,
) -> Result<CheckedEvolution> {
    check_j("lindblad_rk4", rho0, j)?;
    let mut steps = validate_lindblad(rho0, h, kappa, t, dt)?;
    let mut coarse = rk4_run(&rho0.0, h, j, kappa, t, steps);
    let mut last_delta = f64::NAN;
    for _ in 0..=MAX_REFINEMENTS {
        let fine = rk4_run(&rho0.0, h, j, kappa, t, 2 * steps);
        let delta = coarse.distance_max(&fine)?;
        steps *= 2;
        if delta < STEP_DOUBLING_TOL {
            check_drift(&fine)?;
            return Ok(CheckedEvolution {
                state: DensityMatrix(fine),
                dt: t / steps as f64,
                step_doubling_delta: delta,
            });
        }
        last_delta = delta;
        coarse = fine;
    }
    Err(Error::Integration(format!(
        "step doubling did not settle below {STEP_DOUBLING_TOL:e} (last change {last_delta:e})"
    )))
}

/// Frame positions reachable from `seeds` through nonzero entries of `h`.
fn coupled_positions(h: &ComplexMatrix, seeds: &[usize]) -> Vec<usize> {
    let d = h.rows();
    let mut seen = vec![false; d];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(c) = stack.pop() {
        for r in 0..d {
            if !seen[r] && (h[(r, c)] != ZERO || h[(c, r)] != ZERO) {
                seen[r] = true;
                stack.push(r);
            }
        }
    }
    (0..d).filter(|&i| seen[i]).collect()
}

/// Final state of a pure input evolved under `h` for time `t` with noise,
/// restricted to the frame positions coupled to the input (listed in the
/// returned vector). `h`, `j` and `input` share coordinates.
///
/// The ensemble model applies the phase channel after the coherent
/// evolution. That is exact when `[H, J] = 0`, as for every gate here; for
/// Hamiltonians that do not conserve `J` use the Lindblad model.
pub fn noisy_evolution(
    h: &ComplexMatrix,
    j: &[f64],
    t: f64,
    input: &[C64],
    config: &NoiseConfig,
) -> Result<(Vec<usize>, DensityMatrix)> {
    config.validate()?;
    let d = h.rows();
    if input.len() != d || j.len() != d || !h.is_square() {
        return Err(Error::DimensionMismatch {
            op: "noisy_evolution",
            left: h.shape(),
            right: (input.len(), j.len()),
        });
    }
    let seeds: Vec<usize> = (0..d).filter(|&i| input[i] != ZERO).collect();
    let support = coupled_positions(h, &seeds);
    let h_s = h.select(&support, &support);
    let j_s: Vec<f64> = support.iter().map(|&i| j[i]).collect();
    let in_s: Vec<C64> = support.iter().map(|&i| input[i]).collect();
    let rho0 = DensityMatrix::pure(&in_s)?;
    let rho = match config.model {
        NoiseModel::Lindblad if t == 0.0 => rho0,
        NoiseModel::Lindblad => lindblad_rk4_checked(&rho0, &h_s, &j_s, config.strength, t, config.step_for(t))?.state,
        NoiseModel::PhaseEnsemble => {
            let u = evolve(&h_s, t)?;
            collective_phase_channel_with(&rho0.conjugate(&u)?, &j_s, config)?
        }
    };
    Ok((support, rho))
}

/// `⟨target|ρ(t)|target⟩` for the state produced by [`noisy_evolution`];
/// `target` is normalized here.
pub fn noisy_fidelity(
    h: &ComplexMatrix,
    j: &[f64],
    t: f64,
    input: &[C64],
    target: &[C64],
    config: &NoiseConfig,
) -> Result<f64> {
    if target.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            op: "noisy_fidelity",
            left: h.shape(),
            right: (target.len(), 1),
        });
    }
    let (support, rho) = noisy_evolution(h, j, t, input, config)?;
    let target_norm = crate::linalg::norm(target);
    let t_hat: Vec<C64> = support.iter().map(|&i| target[i] / target_norm).collect();
    // Any target weight outside the support is unreachable and contributes zero.
    Ok(rho.fidelity_with_pure(&t_hat)?.clamp(0.0, 1.0))
}

fn check_logical_input(instance: &GateInstance, psi_logical: &[C64]) -> Result<()> {
    let dim = instance.encoding.logical_dim();
    let norm = crate::linalg::norm(psi_logical);
    if psi_logical.len() != dim || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "logical input must be a normalized {dim}-vector"
        )));
    }
    Ok(())
}

/// Logical block `B†ρ(τ)B` of an encoded gate run under noise. Its trace is
/// below one only if population leaked out of the code space.
pub fn noisy_gate_state(instance: &GateInstance, psi_logical: &[C64], config: &NoiseConfig) -> Result<ComplexMatrix> {
    check_logical_input(instance, psi_logical)?;
    let encoding = &instance.encoding;
    let frame = &instance.frame;
    let input = frame.vector_from_sparse(&encoding.encode_state(psi_logical)?)?;
    let j = frame.collective_z_diagonal();
    let (support, rho) = noisy_evolution(&instance.hamiltonian, &j, instance.tau, &input, config)?;
    let local: Vec<Option<usize>> = encoding
        .logical_to_physical
        .iter()
        .map(|&p| frame.position(p).and_then(|f| support.iter().position(|&s| s == f)))
        .collect();
    let d = local.len();
    Ok(ComplexMatrix::from_fn(d, d, |a, b| match (local[a], local[b]) {
        (Some(x), Some(y)) => rho.matrix()[(x, y)],
        _ => ZERO,
    }))
}

/// Fidelity of an encoded gate run under noise against the encoded ideal
/// output `target · ψ_L`.
pub fn noisy_gate_fidelity(instance: &GateInstance, psi_logical: &[C64], config: &NoiseConfig) -> Result<f64> {
    let rho_l = noisy_gate_state(instance, psi_logical, config)?;
    let ideal = instance.target.matvec(psi_logical)?;
    let f = inner(&ideal, &rho_l.matvec(&ideal)?).re;
    Ok(f.clamp(0.0, 1.0))
}

/// Unencoded two-qubit CNOT generator `Ω · ¼ (I − Z₁)(I − X₂)`; a pulse of
/// length `π/Ω` yields CNOT exactly.
pub fn baseline_cnot_hamiltonian(omega: f64) -> ComplexMatrix {
    let p1 = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.0, 1.0]]);
    let minus = ComplexMatrix::from_real_rows(&[[0.5, -0.5], [-0.5, 0.5]]);
    p1.kron(&minus).scale_real(omega)
}

/// Bare CNOT on `(|00⟩ + |10⟩)/√2` under the same noise, against the Bell
/// output `(|00⟩ + |11⟩)/√2`.
pub fn baseline_cnot_fidelity(omega: f64, config: &NoiseConfig) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidConfig(format!("omega must be positive, got {omega}")));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let input = [C64::new(r, 0.0), ZERO, C64::new(r, 0.0), ZERO];
    let target = [C64::new(r, 0.0), ZERO, ZERO, C64::new(r, 0.0)];
    let h = baseline_cnot_hamiltonian(omega);
    let j = full_space_j(4)?;
    noisy_fidelity(&h, &j, std::f64::consts::PI / omega, &input, &target, config)
}
