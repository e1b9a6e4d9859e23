//! Decoherence-free subspaces of collective dephasing and the pair encoding
//! `|0⟩_L = |01⟩`, `|1⟩_L = |10⟩`.
//!
//! Logical qubit `k` (1-based) occupies physical qubits `2k-1` and `2k`.
//! Logical basis order is binary ascending with logical qubit 1 most
//! significant, mirroring the physical convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::pauli::MAX_QUBITS;

pub const MAX_LOGICAL: usize = MAX_QUBITS / 2;

/// Orthonormal columns spanning a subspace of an `ambient_dim` space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: ComplexMatrix,
}

impl Subspace {
    pub fn new(basis: ComplexMatrix) -> Self {
        Self {
            ambient_dim: basis.rows(),
            basis,
        }
    }

    /// Span of computational basis states, given as frame members.
    pub fn from_indices(frame: &Frame, indices: &[usize]) -> Result<Self> {
        let cols = indices
            .iter()
            .map(|&i| frame.basis_vector(i))
            .collect::<Result<Vec<_>>>()?;
        let mut basis = ComplexMatrix::from_columns(&cols)?;
        if indices.is_empty() {
            basis = ComplexMatrix::zeros(frame.dim(), 0);
        }
        Ok(Self::new(basis))
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `B B†`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.dagger()
    }

    /// ‖B†B - I‖_max.
    pub fn orthonormality_residual(&self) -> f64 {
        let gram = &self.basis.dagger() * &self.basis;
        (&gram - &ComplexMatrix::identity(self.dim())).norm_max()
    }
}

/// All `n_physical`-bit strings of the given Hamming weight, ascending. These
/// span an eigenspace of `Σ_k Z_k` (eigenvalue `n - 2w`).
pub fn weight_states(n_physical: usize, weight: usize) -> Result<Vec<usize>> {
    if n_physical == 0 || n_physical > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits: n_physical,
            max: MAX_QUBITS,
        });
    }
    if weight > n_physical {
        return Err(Error::InvalidWeight { weight, n_physical });
    }
    Ok((0..1usize << n_physical)
        .filter(|i| i.count_ones() as usize == weight)
        .collect())
}

pub fn weight_subspace(n_physical: usize, weight: usize) -> Result<Subspace> {
    let states = weight_states(n_physical, weight)?;
    Subspace::from_indices(&Frame::full(n_physical)?, &states)
}

/// Physical pair pattern of one logical bit.
#[inline]
pub fn pair_bits(logical_bit: u8) -> usize {
    if logical_bit == 0 {
        0b01
    } else {
        0b10
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ancilla {
    pub name: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfsEncoding {
    pub n_logical: usize,
    pub n_physical: usize,
    /// Entry `x` is the physical index of logical basis state `x`.
    pub logical_to_physical: Vec<usize>,
    pub ancillas: Vec<Ancilla>,
}

/// Pair encoding on `n_logical` qubits. Two-qubit registers carry the
/// ancillas `a1 = |0011⟩`, `a2 = |1100⟩`; three-qubit registers carry
/// `a3 = |100011⟩`, `a4 = |101100⟩`.
pub fn standard_encoding(n_logical: usize) -> Result<DfsEncoding> {
    if n_logical == 0 || n_logical > MAX_LOGICAL {
        return Err(Error::UnsupportedEncodingSize(n_logical));
    }
    let logical_to_physical = (0..1usize << n_logical).map(|x| encode_index(x, n_logical)).collect();
    let ancillas = match n_logical {
        2 => vec![
            Ancilla {
                name: "a1".into(),
                index: 0b0011,
            },
            Ancilla {
                name: "a2".into(),
                index: 0b1100,
            },
        ],
        3 => vec![
            Ancilla {
                name: "a3".into(),
                index: 0b100011,
            },
            Ancilla {
                name: "a4".into(),
                index: 0b101100,
            },
        ],
        _ => Vec::new(),
    };
    Ok(DfsEncoding {
        n_logical,
        n_physical: 2 * n_logical,
        logical_to_physical,
        ancillas,
    })
}

/// Physical index of logical basis state `x` on `n_logical` qubits.
pub fn encode_index(x: usize, n_logical: usize) -> usize {
    (1..=n_logical).fold(0, |acc, k| {
        let bit = ((x >> (n_logical - k)) & 1) as u8;
        (acc << 2) | pair_bits(bit)
    })
}

impl DfsEncoding {
    pub fn logical_dim(&self) -> usize {
        1 << self.n_logical
    }

    pub fn physical_dim(&self) -> usize {
        1 << self.n_physical
    }

    pub fn ancilla(&self, name: &str) -> Option<usize> {
        self.ancillas.iter().find(|a| a.name == name).map(|a| a.index)
    }

    /// Logical image followed by the ancillas. For two logical qubits this is
    /// the six-state DFS of the controlled-U construction; for three it is the
    /// ten listed states used by the three-qubit gates (not the full
    /// 20-dimensional weight-3 space).
    pub fn protected_states(&self) -> Vec<usize> {
        let mut v = self.logical_to_physical.clone();
        v.extend(self.ancillas.iter().map(|a| a.index));
        v
    }

    pub fn logical_subspace(&self) -> Result<Subspace> {
        self.logical_subspace_in(&Frame::full(self.n_physical)?)
    }

    pub fn logical_subspace_in(&self, frame: &Frame) -> Result<Subspace> {
        Subspace::from_indices(frame, &self.logical_to_physical)
    }

    /// Sparse physical image `Σ_x ψ_x |enc(x)⟩` of a logical state vector.
    pub fn encode_state(&self, logical: &[C64]) -> Result<Vec<(usize, C64)>> {
        if logical.len() != self.logical_dim() {
            return Err(Error::DimensionMismatch {
                op: "encode_state",
                left: (self.logical_dim(), 1),
                right: (logical.len(), 1),
            });
        }
        Ok(logical
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(x, &a)| (self.logical_to_physical[x], a))
            .collect())
    }

    /// Dense physical vector of a logical state.
    pub fn encode_state_dense(&self, logical: &[C64]) -> Result<Vec<C64>> {
        let mut v = vec![ZERO; self.physical_dim()];
        for (i, a) in self.encode_state(logical)? {
            v[i] = a;
        }
        Ok(v)
    }

    /// `B M B†` on the full physical space.
    pub fn embed_logical_operator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.logical_dim();
        if m.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                op: "embed_logical_operator",
                left: (d, d),
                right: m.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.physical_dim(), self.physical_dim());
        for (r, &pr) in self.logical_to_physical.iter().enumerate() {
            for (c, &pc) in self.logical_to_physical.iter().enumerate() {
                out[(pr, pc)] = m[(r, c)];
            }
        }
        Ok(out)
    }

    /// `B† U B` for a full-space physical operator.
    pub fn extract_logical(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.extract_logical_in(&Frame::full(self.n_physical)?, u)
    }

    /// `B† U B` for an operator expressed in frame coordinates.
    pub fn extract_logical_in(&self, frame: &Frame, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        if u.shape() != (frame.dim(), frame.dim()) || frame.n_qubits() != self.n_physical {
            return Err(Error::DimensionMismatch {
                op: "extract_logical",
                left: (frame.dim(), frame.dim()),
                right: u.shape(),
            });
        }
        let pos = self
            .logical_to_physical
            .iter()
            .map(|&i| frame.position(i).ok_or(Error::OutsideFrame { index: i }))
            .collect::<Result<Vec<_>>>()?;
        Ok(u.select(&pos, &pos))
    }
}

/// `|+⟩_L = cos(α/2)|0⟩_L + e^{iβ} sin(α/2)|1⟩_L` and
/// `|−⟩_L = e^{−iβ} sin(α/2)|0⟩_L − cos(α/2)|1⟩_L` as logical coefficient pairs.
pub fn plus_minus_coefficients(alpha: f64, beta: f64) -> ([C64; 2], [C64; 2]) {
    let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let plus = [C64::new(c, 0.0), C64::from_polar(s, beta)];
    let minus = [C64::from_polar(s, -beta), C64::new(-c, 0.0)];
    (plus, minus)
}

/// The `|±⟩_L` pair of a logical qubit written on its physical pair
/// (4-dimensional, pair bits ordered `|q_{2k-1} q_{2k}⟩`).
pub fn plus_minus_states(
    encoding: &DfsEncoding,
    target_logical_qubit: usize,
    alpha: f64,
    beta: f64,
) -> Result<(Vec<C64>, Vec<C64>)> {
    if target_logical_qubit == 0 || target_logical_qubit > encoding.n_logical {
        return Err(Error::QubitIndexOutOfRange {
            index: target_logical_qubit,
            n_qubits: encoding.n_logical,
        });
    }
    let (p, m) = plus_minus_coefficients(alpha, beta);
    let on_pair = |coeffs: [C64; 2]| {
        let mut v = vec![ZERO; 4];
        v[pair_bits(0)] = coeffs[0];
        v[pair_bits(1)] = coeffs[1];
        v
    };
    Ok((on_pair(p), on_pair(m)))
}

/// Logical product state `⊗_k ψ_k` from per-qubit coefficient pairs.
pub fn logical_product(qubits: &[[C64; 2]]) -> Vec<C64> {
    qubits.iter().fold(vec![ONE], |acc, q| {
        acc.iter().flat_map(|&a| [a * q[0], a * q[1]]).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use crate::pauli::OperatorExpr;

    const LOGICAL_ZERO: [C64; 2] = [ONE, ZERO];
    const LOGICAL_ONE: [C64; 2] = [ZERO, ONE];

    #[test]
    fn four_qubit_weight_two_is_six_state_dfs() {
        assert_eq!(
            weight_states(4, 2).unwrap(),
            vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(weight_states(2, 1).unwrap(), vec![0b01, 0b10]);
        assert_eq!(weight_states(3, 0).unwrap(), vec![0]);
        assert_eq!(weight_states(6, 3).unwrap().len(), 20);
        assert!(matches!(weight_states(3, 4), Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn weight_states_are_collective_z_eigenvectors() {
        for (n, w) in [(2, 1), (4, 2), (6, 3), (5, 1)] {
            let j = OperatorExpr::collective_z(n).compile().unwrap();
            let s = weight_subspace(n, w).unwrap();
            let eig = (n as f64) - 2.0 * (w as f64);
            let lhs = &j * &s.basis;
            let rhs = s.basis.scale_real(eig);
            assert!((&lhs - &rhs).norm_max() < 1e-15);
            assert!(s.orthonormality_residual() < 1e-15);
        }
    }

    #[test]
    fn projector_is_idempotent_hermitian() {
        let p = weight_subspace(4, 2).unwrap().projector();
        assert!((&(&p * &p) - &p).norm_max() < 1e-15);
        assert!(p.is_hermitian(0.0));
    }

    #[test]
    fn standard_encodings() {
        let e2 = standard_encoding(2).unwrap();
        assert_eq!(e2.logical_to_physical, vec![0b0101, 0b0110, 0b1001, 0b1010]);
        assert_eq!(e2.logical_to_physical[0b10], 0b1001);
        assert_eq!(e2.ancilla("a1"), Some(0b0011));
        assert_eq!(e2.ancilla("a2"), Some(0b1100));

        let e3 = standard_encoding(3).unwrap();
        assert_eq!(e3.logical_to_physical[0b111], 0b101010);
        assert_eq!(e3.ancilla("a3"), Some(0b100011));
        assert_eq!(e3.ancilla("a4"), Some(0b101100));
        assert!(standard_encoding(0).is_err());
        assert!(standard_encoding(7).is_err());
    }

    #[test]
    fn encoded_states_share_weight_and_ancillas_are_disjoint() {
        for n in 1..=MAX_LOGICAL {
            let e = standard_encoding(n).unwrap();
            for &i in e.protected_states().iter() {
                assert_eq!(i.count_ones() as usize, n);
            }
            for a in &e.ancillas {
                assert!(!e.logical_to_physical.contains(&a.index));
            }
        }
    }

    #[test]
    fn listed_three_qubit_dfs_is_ten_weight_three_states() {
        let e3 = standard_encoding(3).unwrap();
        let mut listed = e3.protected_states();
        listed.sort_unstable();
        let expected = vec![
            0b010101, 0b010110, 0b011001, 0b011010, 0b100011, 0b100101, 0b100110, 0b101001, 0b101010, 0b101100,
        ];
        assert_eq!(listed, expected);
    }

    #[test]
    fn plus_minus_special_cases() {
        let e = standard_encoding(1).unwrap();
        let (p, m) = plus_minus_states(&e, 1, 0.0, 0.3).unwrap();
        assert_eq!(p[0b01], ONE);
        assert!((m[0b10] + ONE).norm() < 1e-16);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (p, m) = plus_minus_states(&e, 1, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        assert!((p[0b01].re - r).abs() < 1e-15 && (p[0b10].re - r).abs() < 1e-15);
        assert!((m[0b01].re - r).abs() < 1e-15 && (m[0b10].re + r).abs() < 1e-15);
        assert!(plus_minus_states(&e, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn plus_minus_orthonormal_for_samples() {
        for k in 0..50 {
            let alpha = 0.37 * k as f64;
            let beta = -1.1 + 0.23 * k as f64;
            let (p, m) = plus_minus_coefficients(alpha, beta);
            assert!(inner(&p, &m).norm() < 1e-15);
            assert!((inner(&p, &p).re - 1.0).abs() < 1e-15);
            assert!((inner(&m, &m).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn logical_round_trip() {
        let e = standard_encoding(2).unwrap();
        assert_eq!(
            e.extract_logical(&ComplexMatrix::identity(16)).unwrap(),
            ComplexMatrix::identity(4)
        );
        let m = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(i as f64 - 0.5 * j as f64, (i * j) as f64));
        let round = e.extract_logical(&e.embed_logical_operator(&m).unwrap()).unwrap();
        assert_eq!(round, m);
        assert!(e.extract_logical(&ComplexMatrix::identity(8)).is_err());
    }

    #[test]
    fn logical_product_ordering() {
        let v = logical_product(&[LOGICAL_ONE, LOGICAL_ZERO]);
        assert_eq!(v, vec![ZERO, ZERO, ONE, ZERO]);
        let e = standard_encoding(2).unwrap();
        assert_eq!(e.encode_state(&v).unwrap(), vec![(0b1001, ONE)]);
    }
}
