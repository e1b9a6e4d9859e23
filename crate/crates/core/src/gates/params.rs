use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Controllable angles of the Λ-type controlled-U Hamiltonians. `omega` is
/// the overall coupling strength (inverse time, ℏ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub omega: f64,
    pub xi: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Detunings and Rabi couplings derived from [`GateParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub delta1: f64,
    pub delta2: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub omega3: C64,
    pub omega4: C64,
}

impl GateParams {
    pub fn new(omega: f64, xi: f64, gamma: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidConfig(format!("omega must be positive, got {omega}")));
        }
        if ![xi, gamma, alpha, beta].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidConfig("angles must be finite".into()));
        }
        Ok(Self {
            omega,
            xi,
            gamma,
            alpha,
            beta,
        })
    }

    /// ξ = π/2, γ = 0, α = π/2, β = 0: δ = θ/2 = π/2 and U = X.
    pub fn cnot(omega: f64) -> Self {
        Self {
            omega,
            xi: FRAC_PI_2,
            gamma: 0.0,
            alpha: FRAC_PI_2,
            beta: 0.0,
        }
    }

    /// The (ξ = π, γ = 0, α = π/2, β = 0) choice, which gives
    /// δ − θ/2 = δ + θ/2 = π and therefore U = −I rather than X.
    pub fn cnot_with_xi_pi(omega: f64) -> Self {
        Self {
            xi: PI,
            ..Self::cnot(omega)
        }
    }

    /// Chooses ξ, γ ∈ [−π/2, π/2] reproducing the requested δ, θ (mod 2π).
    pub fn from_phases(omega: f64, delta: f64, theta: f64, alpha: f64, beta: f64) -> Result<Self> {
        let sin_from = |phase: f64| (reduce_angle(phase - PI) / PI).clamp(-1.0, 1.0).asin();
        Self::new(
            omega,
            sin_from(delta - theta / 2.0),
            sin_from(delta + theta / 2.0),
            alpha,
            beta,
        )
    }

    pub fn couplings(&self) -> Couplings {
        let GateParams {
            omega,
            xi,
            gamma,
            alpha,
            beta,
        } = *self;
        let (ca, sa) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
        Couplings {
            delta1: -omega * xi.sin(),
            delta2: -omega * gamma.sin(),
            omega1: C64::new(omega * xi.cos() * ca, 0.0),
            omega2: C64::from_polar(omega * xi.cos() * sa, beta),
            omega3: C64::new(-omega * gamma.cos() * ca, 0.0),
            omega4: C64::from_polar(omega * gamma.cos() * sa, beta),
        }
    }

    /// τ with Ωτ = π.
    pub fn pulse_time(&self) -> f64 {
        PI / self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredkinParams {
    pub eta: f64,
}

impl FredkinParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
        }
        Ok(Self { eta })
    }

    /// τ with ητ = π/√2.
    pub fn pulse_time(&self) -> f64 {
        PI / (std::f64::consts::SQRT_2 * self.eta)
    }
}

/// Overall phase δ and rotation angle θ of the realized single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseAngles {
    /// Reduced to (−π, π] jointly with `theta`, so the eigenphases
    /// `δ ∓ θ/2` are unchanged mod 2π.
    pub delta: f64,
    /// Reduced to (−π, π].
    pub theta: f64,
    pub delta_raw: f64,
    pub theta_raw: f64,
}

impl PhaseAngles {
    /// δ − θ/2 (raw).
    pub fn lower(&self) -> f64 {
        self.delta_raw - self.theta_raw / 2.0
    }

    /// δ + θ/2 (raw).
    pub fn upper(&self) -> f64 {
        self.delta_raw + self.theta_raw / 2.0
    }
}

/// δ − θ/2 = π + π sin ξ and δ + θ/2 = π + π sin γ.
pub fn phase_angles(params: &GateParams) -> PhaseAngles {
    let (sx, sg) = (params.xi.sin(), params.gamma.sin());
    let delta_raw = PI + FRAC_PI_2 * (sx + sg);
    let theta_raw = PI * (sg - sx);
    // (δ, θ) and (δ + π, θ + 2π) give the same pair of eigenphases.
    let theta = reduce_angle(theta_raw);
    let turns = ((theta_raw - theta) / (2.0 * PI)).round();
    PhaseAngles {
        delta: reduce_angle(delta_raw - PI * turns),
        theta,
        delta_raw,
        theta_raw,
    }
}

/// Maps an angle to (−π, π].
pub fn reduce_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = x.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs()
}
