//! The three gate Hamiltonians as Pauli-string expressions on `2N` physical
//! qubits, parameterized by a [`Placement`] of their logical roles.
//!
//! With logical control `m` and target `n`, physical qubits `2m-1, 2m` carry
//! the control and `2n-1, 2n` the target; the default placements reproduce the
//! four- and six-qubit constructions verbatim.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::params::{FredkinParams, GateParams};
use crate::dfs::MAX_LOGICAL;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::pauli::OperatorExpr;

/// Logical-qubit roles of one gate: `[control, target]` for controlled-U,
/// `[control, control, target]` for C₂-U, `[control, target, target]` for
/// Fredkin. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    roles: Vec<usize>,
    n_logical: usize,
}

impl Placement {
    pub fn new(roles: Vec<usize>, n_logical: usize) -> Result<Self> {
        if !(2..=3).contains(&roles.len()) {
            return Err(Error::InvalidPlacement(format!(
                "expected 2 or 3 role indices, got {}",
                roles.len()
            )));
        }
        if n_logical > MAX_LOGICAL {
            return Err(Error::InvalidPlacement(format!(
                "{n_logical} logical qubits exceeds the {MAX_LOGICAL}-qubit limit"
            )));
        }
        for (i, &r) in roles.iter().enumerate() {
            if r == 0 || r > n_logical {
                return Err(Error::InvalidPlacement(format!(
                    "role index {r} outside 1..={n_logical}"
                )));
            }
            if roles[..i].contains(&r) {
                return Err(Error::InvalidPlacement(format!("role index {r} repeated")));
            }
        }
        Ok(Self { roles, n_logical })
    }

    /// Roles `[1, 2]` or `[1, 2, 3]` on the smallest register.
    pub fn default_for(arity: usize) -> Self {
        Self {
            roles: (1..=arity).collect(),
            n_logical: arity,
        }
    }

    pub fn roles(&self) -> &[usize] {
        &self.roles
    }

    pub fn arity(&self) -> usize {
        self.roles.len()
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_physical(&self) -> usize {
        2 * self.n_logical
    }

    fn expect_arity(&self, arity: usize, what: &str) -> Result<()> {
        if self.arity() != arity {
            return Err(Error::InvalidPlacement(format!(
                "{what} needs {arity} logical roles, got {}",
                self.arity()
            )));
        }
        Ok(())
    }

    /// Logical qubit permutation taking the default role positions to this
    /// placement: entry `i` is the new (1-based) position of qubit `i + 1`.
    /// Non-role qubits keep their relative order.
    pub fn permutation(&self) -> Vec<usize> {
        let mut spectators = (1..=self.n_logical).filter(|q| !self.roles.contains(q));
        (0..self.n_logical)
            .map(|i| {
                if i < self.roles.len() {
                    self.roles[i]
                } else {
                    spectators.next().expect("spectator count")
                }
            })
            .collect()
    }
}

/// Physical qubits `(2k-1, 2k)` of logical qubit `k`.
fn pair(k: usize) -> (usize, usize) {
    (2 * k - 1, 2 * k)
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `½{(I+Z)_{c2}[Δ₁(I+Z)_{c1} + (Ω₁R_{c1,t1} + Ω₂R_{c1,t2} + h.c.)]
///  + (I−Z)_{c1}[Δ₂(I−Z)_{c2} + (Ω₃R_{c2,t1} + Ω₄R_{c2,t2} + h.c.)]}`.
pub fn h1_expr(params: &GateParams, placement: &Placement) -> Result<OperatorExpr> {
    placement.expect_arity(2, "controlled-U")?;
    let n = placement.n_physical();
    let (c1, c2) = pair(placement.roles()[0]);
    let (t1, t2) = pair(placement.roles()[1]);
    let k = params.couplings();

    let hop = |a, b, w: C64| OperatorExpr::hop(n, a, b).scale(w);
    let upper = {
        let drive = &hop(c1, t1, k.omega1) + &hop(c1, t2, k.omega2);
        let detuning = OperatorExpr::i_plus_z(n, c1, 1.0).scale_real(k.delta1);
        &OperatorExpr::i_plus_z(n, c2, 1.0) * &(&detuning + &drive.plus_hc())
    };
    let lower = {
        let drive = &hop(c2, t1, k.omega3) + &hop(c2, t2, k.omega4);
        let detuning = OperatorExpr::i_plus_z(n, c2, -1.0).scale_real(k.delta2);
        &OperatorExpr::i_plus_z(n, c1, -1.0) * &(&detuning + &drive.plus_hc())
    };
    Ok((&upper + &lower).scale_real(0.5))
}

/// `¼{(I−Z)_{a}(I+Z)_{n2}[Δ₁(I+Z)_{n1} + (Ω₁R_{n1,l1} + Ω₂R_{n1,l2} + h.c.)]
///  + (I−Z)_{a}(I−Z)_{n1}[Δ₂(I−Z)_{n2} + (Ω₃R_{n2,l1} + Ω₄R_{n2,l2} + h.c.)]}`
/// where `a` is the first physical qubit of the first control.
pub fn h2_expr(params: &GateParams, placement: &Placement) -> Result<OperatorExpr> {
    placement.expect_arity(3, "C2-U")?;
    let n = placement.n_physical();
    let (a, _) = pair(placement.roles()[0]);
    let (n1, n2) = pair(placement.roles()[1]);
    let (l1, l2) = pair(placement.roles()[2]);
    let k = params.couplings();

    let hop = |p, q, w: C64| OperatorExpr::hop(n, p, q).scale(w);
    let control = OperatorExpr::i_plus_z(n, a, -1.0);
    let upper = {
        let drive = &hop(n1, l1, k.omega1) + &hop(n1, l2, k.omega2);
        let detuning = OperatorExpr::i_plus_z(n, n1, 1.0).scale_real(k.delta1);
        let gate = &control * &OperatorExpr::i_plus_z(n, n2, 1.0);
        &gate * &(&detuning + &drive.plus_hc())
    };
    let lower = {
        let drive = &hop(n2, l1, k.omega3) + &hop(n2, l2, k.omega4);
        let detuning = OperatorExpr::i_plus_z(n, n2, -1.0).scale_real(k.delta2);
        let gate = &control * &OperatorExpr::i_plus_z(n, n1, -1.0);
        &gate * &(&detuning + &drive.plus_hc())
    };
    Ok((&upper + &lower).scale_real(0.25))
}

/// `η/(2√2) (I−Z)_{a} (R_{n1,l1} − R_{n2,l2} + h.c.)`.
pub fn h3_expr(params: &FredkinParams, placement: &Placement) -> Result<OperatorExpr> {
    placement.expect_arity(3, "Fredkin")?;
    let n = placement.n_physical();
    let (a, _) = pair(placement.roles()[0]);
    let (n1, n2) = pair(placement.roles()[1]);
    let (l1, l2) = pair(placement.roles()[2]);
    let swap = &OperatorExpr::hop(n, n1, l1) + &OperatorExpr::hop(n, n2, l2).scale(-ONE);
    let h = &OperatorExpr::i_plus_z(n, a, -1.0) * &swap.plus_hc();
    Ok(h.scale(c(params.eta / (2.0 * SQRT_2))))
}

pub fn build_h1(params: &GateParams, placement: &Placement) -> Result<ComplexMatrix> {
    h1_expr(params, placement)?.compile()
}

pub fn build_h2(params: &GateParams, placement: &Placement) -> Result<ComplexMatrix> {
    h2_expr(params, placement)?.compile()
}

pub fn build_h3(params: &FredkinParams, placement: &Placement) -> Result<ComplexMatrix> {
    h3_expr(params, placement)?.compile()
}

/// Ancilla states of a placed gate: physical basis indices with the role
/// pairs in the ancilla pattern and every spectator in a logical state.
/// Names carry the spectator bits when there are any, e.g. `a3[01]`.
pub fn placement_ancillas(placement: &Placement) -> Vec<(String, usize)> {
    // (name, pair patterns for each role in role order)
    let patterns: &[(&str, &[usize])] = if placement.arity() == 2 {
        &[("a1", &[0b00, 0b11]), ("a2", &[0b11, 0b00])]
    } else {
        &[("a3", &[0b10, 0b00, 0b11]), ("a4", &[0b10, 0b11, 0b00])]
    };
    let n = placement.n_logical();
    let spectators: Vec<usize> = (1..=n).filter(|q| !placement.roles().contains(q)).collect();
    let mut out = Vec::new();
    for &(name, pattern) in patterns {
        for s in 0..1usize << spectators.len() {
            let mut index = 0usize;
            for q in 1..=n {
                let bits = if let Some(r) = placement.roles().iter().position(|&x| x == q) {
                    pattern[r]
                } else {
                    let j = spectators.iter().position(|&x| x == q).expect("spectator");
                    let bit = ((s >> (spectators.len() - 1 - j)) & 1) as u8;
                    crate::dfs::pair_bits(bit)
                };
                index = (index << 2) | bits;
            }
            let label = if spectators.is_empty() {
                name.to_string()
            } else {
                format!("{name}[{s:0width$b}]", width = spectators.len())
            };
            out.push((label, index));
        }
    }
    out
}

/// Working frame for a gate Hamiltonian: the full register when it has at
/// most `full_limit` physical qubits, otherwise the closure of the protected
/// states under the Hamiltonian.
pub fn gate_frame(expr: &OperatorExpr, seeds: &[usize], full_limit: usize) -> Result<Frame> {
    if expr.n_qubits() <= full_limit {
        Frame::full(expr.n_qubits())
    } else {
        Frame::restricted(expr.n_qubits(), expr.basis_closure(seeds.iter().copied())?)
    }
}
