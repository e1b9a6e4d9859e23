//! Working frames: an ordered set of computational basis states of an
//! `n`-qubit register.
//!
//! Operators that conserve an invariant set of basis states (see
//! [`OperatorExpr::basis_closure`](crate::pauli::OperatorExpr::basis_closure))
//! can be compiled and exponentiated on that set alone without approximation.
//! The full frame is the whole `2ⁿ`-dimensional space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::pauli::MAX_QUBITS;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    n_qubits: usize,
    /// Sorted ascending, no duplicates.
    indices: Vec<usize>,
    full: bool,
}

impl Frame {
    pub fn full(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Self {
            n_qubits,
            indices: (0..1usize << n_qubits).collect(),
            full: true,
        })
    }

    pub fn restricted(n_qubits: usize, mut indices: Vec<usize>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_QUBITS,
            });
        }
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= 1 << n_qubits) {
            return Err(Error::OutsideFrame { index: bad });
        }
        let full = indices.len() == 1 << n_qubits;
        Ok(Self {
            n_qubits,
            indices,
            full,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Position of a physical basis index inside the frame.
    pub fn position(&self, index: usize) -> Option<usize> {
        if self.full {
            (index < self.indices.len()).then_some(index)
        } else {
            self.indices.binary_search(&index).ok()
        }
    }

    /// Eigenvalue of `Σ_k Z_k` on each frame state: `n - 2·popcount`.
    pub fn collective_z_diagonal(&self) -> Vec<f64> {
        self.indices
            .iter()
            .map(|&i| self.n_qubits as f64 - 2.0 * i.count_ones() as f64)
            .collect()
    }

    /// Frame coordinates of |index⟩.
    pub fn basis_vector(&self, index: usize) -> Result<Vec<C64>> {
        let pos = self.position(index).ok_or(Error::OutsideFrame { index })?;
        let mut v = vec![ZERO; self.dim()];
        v[pos] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Converts a sparse physical vector `Σ a_i |i⟩` to frame coordinates.
    pub fn vector_from_sparse(&self, amplitudes: &[(usize, C64)]) -> Result<Vec<C64>> {
        let mut v = vec![ZERO; self.dim()];
        for &(index, a) in amplitudes {
            let pos = self.position(index).ok_or(Error::OutsideFrame { index })?;
            v[pos] += a;
        }
        Ok(v)
    }

    /// Columns are the frame coordinates of the given sparse vectors.
    pub fn columns_from_sparse(&self, vectors: &[Vec<(usize, C64)>]) -> Result<ComplexMatrix> {
        let cols = vectors
            .iter()
            .map(|v| self.vector_from_sparse(v))
            .collect::<Result<Vec<_>>>()?;
        ComplexMatrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_frame_positions_are_identity() {
        let f = Frame::full(3).unwrap();
        assert_eq!(f.dim(), 8);
        assert_eq!(f.position(5), Some(5));
        assert_eq!(f.position(8), None);
    }

    #[test]
    fn restricted_frame_sorts_and_looks_up() {
        let f = Frame::restricted(4, vec![12, 3, 5, 3]).unwrap();
        assert_eq!(f.indices(), &[3, 5, 12]);
        assert_eq!(f.position(12), Some(2));
        assert_eq!(f.position(4), None);
        assert!(Frame::restricted(2, vec![4]).is_err());
    }

    #[test]
    fn collective_z_eigenvalues() {
        let f = Frame::full(2).unwrap();
        assert_eq!(f.collective_z_diagonal(), vec![2.0, 0.0, 0.0, -2.0]);
    }
}
