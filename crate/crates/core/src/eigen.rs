//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral propagator `exp(-iHt) = V exp(-iΛt) V†` (ℏ = 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances, C64, ZERO};

pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass below which the iteration stops, relative to
/// `max(1, ‖H‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|l| C64::new(l, 0.0))
    }

    /// `V f(Λ) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &w) in fl.iter().enumerate() {
                    let vjk = v[(j, k)];
                    if w == ZERO || vjk == ZERO {
                        continue;
                    }
                    acc += v[(i, k)] * w * vjk.conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `exp(-iHt)` for the decomposed `H`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.apply_function(|l| C64::from_polar(1.0, -l * t))
    }

    /// `exp(-iHt) B` without forming the full propagator.
    pub fn propagate_columns(&self, t: f64, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let v = &self.eigenvectors;
        let mut coeffs = v.dagger().matmul(b)?;
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let phase = C64::from_polar(1.0, -l * t);
            for j in 0..coeffs.cols() {
                coeffs[(k, j)] *= phase;
            }
        }
        v.matmul(&coeffs)
    }
}

/// Eigendecomposition of a Hermitian matrix with the default Hermiticity
/// tolerance.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig_with(h, Tolerances::default().herm)
}

pub fn hermitian_eig_with(h: &ComplexMatrix, tol_herm: f64) -> Result<Spectrum> {
    let residual = h.hermiticity_residual();
    if residual > tol_herm {
        return Err(Error::NotHermitian {
            residual,
            tol: tol_herm,
        });
    }
    let n = h.rows();
    // Symmetrize so the rotations see an exactly Hermitian matrix.
    let mut a: Vec<C64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i == j {
                C64::new(h[(i, i)].re, 0.0)
            } else {
                (h[(i, j)] + h[(j, i)].conj()) * 0.5
            }
        })
        .collect();
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let threshold = OFF_DIAGONAL_TOL * h.frobenius().max(1.0);
    let off_mass = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_mass(&a);
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNotConverged {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].re.total_cmp(&a[y * n + y].re));
    let eigenvalues = order.iter().map(|&k| a[k * n + k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Givens rotation annihilating `a[p][q]`: `A ← G†AG`, `V ← VG`
/// with `G_pp = G_qq = c`, `G_pq = s·e^{iφ}`, `G_qp = -s·e^{-iφ}` where
/// `a_pq = |a_pq|·e^{iφ}`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_ph = phase * s; // s·e^{iφ}
    let s_ph_conj = s_ph.conj(); // s·e^{-iφ}

    // Columns: A ← A G.
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * s_ph_conj;
        a[k * n + q] = akp * s_ph + akq * c;
    }
    // Rows: A ← G† A.
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * s_ph;
        a[q * n + k] = apk * s_ph_conj + aqk * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * s_ph_conj;
        v[k * n + q] = vkp * s_ph + vkq * c;
    }
}

/// `exp(-iHt)` through the Jacobi spectrum.
pub fn evolve(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(h)?.propagator(t))
}
