//! Single-qubit generators and weighted Pauli-string expressions.
//!
//! Basis convention used everywhere in the crate: qubit 1 is the leftmost
//! tensor factor and the most significant bit of a computational-basis index,
//! and `Z|0⟩ = +|0⟩`. On `n` qubits, qubit `k` therefore sits at bit `n - k`.

use std::collections::{BTreeSet, VecDeque};
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{ComplexMatrix, C64, I, MAX_DIM, ONE, ZERO};

/// Largest register the crate will build operators for.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
    /// `(X - iY)/2 = |1⟩⟨0|`.
    SigmaMinus,
    /// `(X + iY)/2 = |0⟩⟨1|`.
    SigmaPlus,
}

impl PauliKind {
    pub fn dagger(self) -> Self {
        match self {
            PauliKind::SigmaMinus => PauliKind::SigmaPlus,
            PauliKind::SigmaPlus => PauliKind::SigmaMinus,
            other => other,
        }
    }

    /// Image of the single-qubit basis state `|bit⟩`: `Some((amplitude, new_bit))`,
    /// or `None` when the generator annihilates it.
    #[inline]
    pub fn act(self, bit: u8) -> Option<(C64, u8)> {
        match (self, bit) {
            (PauliKind::I, b) => Some((ONE, b)),
            (PauliKind::X, b) => Some((ONE, 1 - b)),
            (PauliKind::Y, 0) => Some((I, 1)),
            (PauliKind::Y, _) => Some((-I, 0)),
            (PauliKind::Z, 0) => Some((ONE, 0)),
            (PauliKind::Z, _) => Some((-ONE, 1)),
            (PauliKind::SigmaMinus, 0) => Some((ONE, 1)),
            (PauliKind::SigmaMinus, _) => None,
            (PauliKind::SigmaPlus, 0) => None,
            (PauliKind::SigmaPlus, _) => Some((ONE, 0)),
        }
    }
}

/// The 2×2 matrix of a generator in the `{|0⟩, |1⟩}` basis.
pub fn pauli_matrix(kind: PauliKind) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |row, col| match kind.act(col as u8) {
        Some((amp, out)) if out as usize == row => amp,
        _ => ZERO,
    })
}

/// `I ⊗ … ⊗ σ ⊗ … ⊗ I` with `σ` on qubit `index` (1-based) of `n_qubits`.
pub fn embed(kind: PauliKind, index: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    check_register(n_qubits)?;
    if index == 0 || index > n_qubits {
        return Err(Error::QubitIndexOutOfRange { index, n_qubits });
    }
    let mut out = ComplexMatrix::identity(1);
    for k in 1..=n_qubits {
        let factor = if k == index {
            pauli_matrix(kind)
        } else {
            ComplexMatrix::identity(2)
        };
        out = out.kron(&factor);
    }
    Ok(out)
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Bit value of 1-based qubit `k` in basis index `state` of an `n`-qubit register.
#[inline]
pub fn qubit_bit(state: usize, k: usize, n: usize) -> u8 {
    ((state >> (n - k)) & 1) as u8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: C64,
    /// `(1-based qubit index, generator)`.
    pub factors: Vec<(usize, PauliKind)>,
}

impl Term {
    pub fn dagger(&self) -> Term {
        Term {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().map(|&(q, k)| (q, k.dagger())).collect(),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &(q, _) in &self.factors {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitIndexOutOfRange { index: q, n_qubits });
            }
            if !seen.insert(q) {
                return Err(Error::DuplicateQubit { index: q });
            }
        }
        Ok(())
    }

    /// Image of basis state `state` under this term (factors on distinct
    /// qubits commute, so the order of application is irrelevant).
    #[inline]
    fn apply(&self, state: usize, n: usize) -> Option<(C64, usize)> {
        if self.coefficient == ZERO {
            return None;
        }
        let mut amp = self.coefficient;
        let mut out = state;
        for &(q, kind) in &self.factors {
            let shift = n - q;
            let bit = ((out >> shift) & 1) as u8;
            let (a, nb) = kind.act(bit)?;
            amp *= a;
            out = (out & !(1 << shift)) | ((nb as usize) << shift);
        }
        Some((amp, out))
    }
}

/// Right-multiplies `factors` by `kind` on qubit `q`, expanding a same-qubit
/// product over `{I, Z, σ⁻, σ⁺}`.
fn multiply_factor(
    c: C64,
    mut factors: Vec<(usize, PauliKind)>,
    q: usize,
    kind: PauliKind,
) -> Vec<(C64, Vec<(usize, PauliKind)>)> {
    let Some(pos) = factors.iter().position(|&(p, _)| p == q) else {
        factors.push((q, kind));
        return vec![(c, factors)];
    };
    let (_, left) = factors.remove(pos);
    let m = &pauli_matrix(left) * &pauli_matrix(kind);
    let half = C64::new(0.5, 0.0);
    let parts = [
        ((m[(0, 0)] + m[(1, 1)]) * half, PauliKind::I),
        ((m[(0, 0)] - m[(1, 1)]) * half, PauliKind::Z),
        (m[(1, 0)], PauliKind::SigmaMinus),
        (m[(0, 1)], PauliKind::SigmaPlus),
    ];
    parts
        .into_iter()
        .filter(|(w, _)| *w != ZERO)
        .map(|(w, k)| {
            let mut f = factors.clone();
            f.insert(pos, (q, k));
            (c * w, f)
        })
        .collect()
}

/// A weighted sum of Pauli-string terms on `n_qubits` physical qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorExpr {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl OperatorExpr {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// `c · I`.
    pub fn scalar(n_qubits: usize, c: C64) -> Self {
        let mut e = Self::zero(n_qubits);
        e.push_term(c, Vec::new());
        e
    }

    /// `c · σ_q`.
    pub fn single(n_qubits: usize, qubit: usize, kind: PauliKind, c: C64) -> Self {
        let mut e = Self::zero(n_qubits);
        e.push_term(c, vec![(qubit, kind)]);
        e
    }

    /// `I_q + sign·Z_q`; with `sign = ±1` this is twice the projector onto
    /// `|0⟩` (resp. `|1⟩`) of qubit `q`.
    pub fn i_plus_z(n_qubits: usize, qubit: usize, sign: f64) -> Self {
        let mut e = Self::scalar(n_qubits, ONE);
        e.push_term(C64::new(sign, 0.0), vec![(qubit, PauliKind::Z)]);
        e
    }

    /// `R_{lm} = ¼(X_l - iY_l)(X_m + iY_m) = σ⁻_l σ⁺_m`, i.e. the hop that flips
    /// qubit `l` from 0 to 1 and qubit `m` from 1 to 0.
    pub fn hop(n_qubits: usize, l: usize, m: usize) -> Self {
        let mut e = Self::zero(n_qubits);
        e.push_term(ONE, vec![(l, PauliKind::SigmaMinus), (m, PauliKind::SigmaPlus)]);
        e
    }

    /// `Σ_k Z_k`, the collective dephasing generator.
    pub fn collective_z(n_qubits: usize) -> Self {
        let mut e = Self::zero(n_qubits);
        for k in 1..=n_qubits {
            e.push_term(ONE, vec![(k, PauliKind::Z)]);
        }
        e
    }

    /// Appends a term verbatim. Malformed factor lists are reported by
    /// [`OperatorExpr::validate`] and [`OperatorExpr::compile`].
    pub fn push_term(&mut self, coefficient: C64, factors: Vec<(usize, PauliKind)>) {
        let factors = factors.into_iter().filter(|&(_, k)| k != PauliKind::I).collect();
        self.terms.push(Term { coefficient, factors });
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn validate(&self) -> Result<()> {
        check_register(self.n_qubits)?;
        self.terms.iter().try_for_each(|t| t.validate(self.n_qubits))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coefficient: t.coefficient * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn dagger(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(Term::dagger).collect(),
        }
    }

    /// `self + self†`.
    pub fn plus_hc(&self) -> Self {
        self + &self.dagger()
    }

    /// Distributes the product term by term. Factors that meet on the same
    /// qubit are multiplied out and re-expanded over `{I, Z, σ⁻, σ⁺}`.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits, "register size mismatch");
        let mut out = Self::zero(self.n_qubits);
        for a in &self.terms {
            for b in &other.terms {
                let mut partial = vec![(a.coefficient * b.coefficient, a.factors.clone())];
                for &(q, kind) in &b.factors {
                    partial = partial
                        .into_iter()
                        .flat_map(|(c, factors)| multiply_factor(c, factors, q, kind))
                        .collect();
                }
                for (coefficient, factors) in partial {
                    out.push_term(coefficient, factors);
                }
            }
        }
        out
    }

    /// Image of a computational basis state, as `(amplitude, index)` pairs
    /// (possibly repeated indices, zero amplitudes dropped).
    pub fn apply_to_basis(&self, state: usize) -> Vec<(C64, usize)> {
        self.terms
            .iter()
            .filter_map(|t| t.apply(state, self.n_qubits))
            .filter(|(a, _)| *a != ZERO)
            .collect()
    }

    /// Dense `2ⁿ×2ⁿ` matrix `Σ c · Π embed(σ, q, n)`.
    pub fn compile(&self) -> Result<ComplexMatrix> {
        self.compile_in(&Frame::full(self.n_qubits)?)
    }

    /// Matrix of the operator on the span of the frame's basis states.
    /// Fails if the operator maps a frame state outside the frame, so the
    /// result is always an exact restriction.
    pub fn compile_in(&self, frame: &Frame) -> Result<ComplexMatrix> {
        self.validate()?;
        if frame.n_qubits() != self.n_qubits {
            return Err(Error::InvalidConfig(format!(
                "frame on {} qubits used for a {}-qubit operator",
                frame.n_qubits(),
                self.n_qubits
            )));
        }
        let dim = frame.dim();
        if dim > MAX_DIM {
            return Err(Error::TooManyQubits {
                n_qubits: self.n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (col, &state) in frame.indices().iter().enumerate() {
            for (amp, image) in self.apply_to_basis(state) {
                let row = frame.position(image).ok_or(Error::OutsideFrame { index: image })?;
                m[(row, col)] += amp;
            }
        }
        Ok(m)
    }

    /// Smallest set of computational basis states containing `seeds` that is
    /// closed under the operator (and its adjoint). The span of the result is
    /// an invariant subspace, so restricting to it is exact.
    pub fn basis_closure(&self, seeds: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
        self.validate()?;
        let adjoint = self.dagger();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if s >= 1 << self.n_qubits {
                return Err(Error::OutsideFrame { index: s });
            }
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(state) = queue.pop_front() {
            let images = self
                .apply_to_basis(state)
                .into_iter()
                .chain(adjoint.apply_to_basis(state));
            for (_, image) in images {
                if seen.insert(image) {
                    queue.push_back(image);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;

    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register size mismatch");
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        OperatorExpr {
            n_qubits: self.n_qubits,
            terms,
        }
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.product(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn standard_matrices() {
        assert_eq!(pauli_matrix(PauliKind::I), ComplexMatrix::identity(2));
        assert_eq!(
            pauli_matrix(PauliKind::Z),
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
        );
        assert_eq!(
            pauli_matrix(PauliKind::Y),
            ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]])
        );
    }

    #[test]
    fn sigma_minus_matches_entrywise_expansion() {
        // (X - iY)/2 expanded from the X and Y literals.
        let x = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let y = ComplexMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]);
        let oracle = (&x - &y.scale(I)).scale_real(0.5);
        assert_eq!(oracle, ComplexMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]));
        assert_eq!(pauli_matrix(PauliKind::SigmaMinus), oracle);
        assert_eq!(
            pauli_matrix(PauliKind::SigmaMinus).dagger(),
            pauli_matrix(PauliKind::SigmaPlus)
        );
    }

    #[test]
    fn embed_conventions() {
        // Z on qubit 1 of |10⟩ (index 2) gives -|10⟩.
        let z1 = embed(PauliKind::Z, 1, 2).unwrap();
        let out = z1.matvec(&basis_vector(4, 0b10)).unwrap();
        assert_eq!(out, basis_vector(4, 0b10).iter().map(|z| -z).collect::<Vec<_>>());
        // X on qubit 2 maps |00⟩ to |01⟩.
        let x2 = embed(PauliKind::X, 2, 2).unwrap();
        assert_eq!(x2.matvec(&basis_vector(4, 0)).unwrap(), basis_vector(4, 0b01));
        assert_eq!(embed(PauliKind::I, 3, 3).unwrap(), ComplexMatrix::identity(8));
        assert!(matches!(
            embed(PauliKind::X, 3, 2),
            Err(Error::QubitIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn hop_r12_is_ket10_bra01() {
        // Brute-force (1/4)(X₁ - iY₁)(X₂ + iY₂) from embedded matrices.
        let x1 = embed(PauliKind::X, 1, 2).unwrap();
        let y1 = embed(PauliKind::Y, 1, 2).unwrap();
        let x2 = embed(PauliKind::X, 2, 2).unwrap();
        let y2 = embed(PauliKind::Y, 2, 2).unwrap();
        let left = &x1 - &y1.scale(I);
        let right = &x2 + &y2.scale(I);
        let oracle = (&left * &right).scale_real(0.25);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0b10, 0b01)] = ONE;
        assert_eq!(oracle, expected);
        assert_eq!(OperatorExpr::hop(2, 1, 2).compile().unwrap(), expected);
    }

    #[test]
    fn zero_coefficient_compiles_to_zero() {
        let mut e = OperatorExpr::zero(3);
        e.push_term(ZERO, vec![(1, PauliKind::X), (3, PauliKind::Y)]);
        assert_eq!(e.compile().unwrap(), ComplexMatrix::zeros(8, 8));
    }

    #[test]
    fn half_i_plus_z_is_ground_projector() {
        let p = OperatorExpr::i_plus_z(1, 1, 1.0).scale_real(0.5);
        assert_eq!(
            p.compile().unwrap(),
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]])
        );
    }

    #[test]
    fn duplicate_qubit_is_malformed() {
        let mut e = OperatorExpr::zero(2);
        e.push_term(ONE, vec![(1, PauliKind::X), (1, PauliKind::Z)]);
        assert_eq!(e.compile(), Err(Error::DuplicateQubit { index: 1 }));
        let mut out_of_range = OperatorExpr::zero(2);
        out_of_range.push_term(ONE, vec![(3, PauliKind::X)]);
        assert!(matches!(
            out_of_range.compile(),
            Err(Error::QubitIndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn closure_of_hop_is_its_orbit() {
        let e = OperatorExpr::hop(3, 1, 3).plus_hc();
        // |001⟩ ↔ |100⟩; |011⟩ ↔ |110⟩ is a separate orbit.
        assert_eq!(e.basis_closure([0b001]).unwrap(), vec![0b001, 0b100]);
        assert_eq!(e.basis_closure([0b010]).unwrap(), vec![0b010]);
    }

    #[test]
    fn register_cap_is_enforced() {
        assert!(matches!(
            OperatorExpr::zero(13).validate(),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
