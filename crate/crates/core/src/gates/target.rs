//! Analytic target gates in the binary-ascending logical basis.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::dfs::plus_minus_coefficients;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances, C64, I, ONE, ZERO};

use super::params::PhaseAngles;

/// `e^{i(δ−θ/2)}|+⟩⟨+| + e^{i(δ+θ/2)}|−⟩⟨−|`.
pub fn target_u(delta: f64, theta: f64, alpha: f64, beta: f64) -> ComplexMatrix {
    let (plus, minus) = plus_minus_coefficients(alpha, beta);
    let p = ComplexMatrix::outer(&plus, &plus).scale(C64::from_polar(1.0, delta - theta / 2.0));
    let m = ComplexMatrix::outer(&minus, &minus).scale(C64::from_polar(1.0, delta + theta / 2.0));
    &p + &m
}

pub fn target_u_from(phases: &PhaseAngles, alpha: f64, beta: f64) -> ComplexMatrix {
    target_u(phases.delta_raw, phases.theta_raw, alpha, beta)
}

/// `e^{iδ} exp(−i(θ/2) n̂·σ)` with `n̂ = (sinα cosβ, sinα sinβ, cosα)`, in the
/// closed form `cos(θ/2) I − i sin(θ/2) n̂·σ`.
pub fn rotation_form(delta: f64, theta: f64, alpha: f64, beta: f64) -> ComplexMatrix {
    let (nx, ny, nz) = (alpha.sin() * beta.cos(), alpha.sin() * beta.sin(), alpha.cos());
    let n_sigma = ComplexMatrix::from_rows(&[
        [C64::new(nz, 0.0), C64::new(nx, -ny)],
        [C64::new(nx, ny), C64::new(-nz, 0.0)],
    ]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let r = &ComplexMatrix::identity(2).scale_real(c) - &n_sigma.scale(I * s);
    r.scale(C64::from_polar(1.0, delta))
}

fn check_unitary(u: &ComplexMatrix, dim: usize) -> Result<()> {
    if u.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            op: "controlled target",
            left: (dim, dim),
            right: u.shape(),
        });
    }
    let residual = u.unitarity_residual();
    let tol = Tolerances::default().unit;
    if residual > tol {
        return Err(Error::NotUnitary { residual, tol });
    }
    Ok(())
}

/// `Diag[I, …, I, U]`: identity except the last 2×2 block.
fn controlled(u: &ComplexMatrix, dim: usize) -> Result<ComplexMatrix> {
    check_unitary(u, 2)?;
    let mut out = ComplexMatrix::identity(dim);
    for i in 0..2 {
        for j in 0..2 {
            out[(dim - 2 + i, dim - 2 + j)] = u[(i, j)];
        }
    }
    Ok(out)
}

pub fn target_c1u(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    controlled(u, 4)
}

pub fn target_c2u(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    controlled(u, 8)
}

/// Identity except the `|101⟩ ↔ |110⟩` swap.
pub fn target_fredkin() -> ComplexMatrix {
    let mut f = ComplexMatrix::identity(8);
    f[(0b101, 0b101)] = ZERO;
    f[(0b110, 0b110)] = ZERO;
    f[(0b101, 0b110)] = ONE;
    f[(0b110, 0b101)] = ONE;
    f
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn cnot() -> ComplexMatrix {
    target_c1u(&pauli_x()).expect("X is unitary")
}

pub fn toffoli() -> ComplexMatrix {
    target_c2u(&pauli_x()).expect("X is unitary")
}

/// Lifts a gate on `roles.len()` logical qubits to an `n_logical` register,
/// acting on `roles` (in order, first role most significant) and as the
/// identity on the remaining qubits.
pub fn place_logical_gate(gate: &ComplexMatrix, roles: &[usize], n_logical: usize) -> ComplexMatrix {
    let k = roles.len();
    assert_eq!(gate.shape(), (1 << k, 1 << k), "gate size vs roles");
    let bit = |x: usize, q: usize| (x >> (n_logical - q)) & 1;
    let role_bits = |x: usize| roles.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
    let mask: usize = roles.iter().map(|&q| 1 << (n_logical - q)).sum();
    let dim = 1 << n_logical;
    ComplexMatrix::from_fn(dim, dim, |y, x| {
        if y & !mask == x & !mask {
            gate[(role_bits(y), role_bits(x))]
        } else {
            ZERO
        }
    })
}

/// `P A P†` where `P` relabels logical qubit `i + 1` as `perm[i]`.
pub fn permute_logical_operator(a: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let dim = 1 << n;
    assert_eq!(a.shape(), (dim, dim));
    let relabel = |x: usize| {
        (0..n).fold(0usize, |acc, i| {
            let b = (x >> (n - 1 - i)) & 1;
            acc | (b << (n - perm[i]))
        })
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for y in 0..dim {
        for x in 0..dim {
            out[(relabel(y), relabel(x))] = a[(y, x)];
        }
    }
    out
}

/// Columns `{a₁, a₂, |0+⟩, |0−⟩, |1+⟩, |1−⟩}` in the 16-dimensional physical
/// space of the default controlled-U register.
pub fn dressed_c1u_basis(alpha: f64, beta: f64) -> ComplexMatrix {
    let (plus, minus) = plus_minus_coefficients(alpha, beta);
    let mut b = ComplexMatrix::zeros(16, 6);
    b[(0b0011, 0)] = ONE;
    b[(0b1100, 1)] = ONE;
    // Control |0⟩_L = |01⟩ or |1⟩_L = |10⟩ on qubits 1-2, target on 3-4.
    for (col, control, t) in [(2, 0b01, plus), (3, 0b01, minus), (4, 0b10, plus), (5, 0b10, minus)] {
        b[((control << 2) | 0b01, col)] = t[0];
        b[((control << 2) | 0b10, col)] = t[1];
    }
    b
}

/// `diag(e^{i(δ−θ/2)}, e^{i(δ+θ/2)}, 1, 1, e^{i(δ−θ/2)}, e^{i(δ+θ/2)})`.
pub fn dressed_c1u_evolution(phases: &PhaseAngles) -> ComplexMatrix {
    let lo = C64::from_polar(1.0, phases.lower());
    let hi = C64::from_polar(1.0, phases.upper());
    ComplexMatrix::from_diag(&[lo, hi, ONE, ONE, lo, hi])
}

/// Bright and dark combinations `(|110⟩ ∓ |101⟩)/√2` of the Fredkin Λ system,
/// as logical 8-vectors.
pub fn fredkin_bright_dark() -> (Vec<C64>, Vec<C64>) {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut bright = vec![ZERO; 8];
    let mut dark = vec![ZERO; 8];
    bright[0b110] = r;
    bright[0b101] = -r;
    dark[0b110] = r;
    dark[0b101] = r;
    (bright, dark)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Oracle: truncated Taylor series of a 2×2 exponential.
    fn series_exp(a: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::identity(a.rows());
        let mut term = ComplexMatrix::identity(a.rows());
        for k in 1..terms {
            term = (&term * a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn not_gate_from_phases() {
        let u = target_u(FRAC_PI_2, PI, FRAC_PI_2, 0.0);
        assert!(u.distance_max(&pauli_x()).unwrap() < 1e-15);
        // e^{iπ/2} exp(-i(π/2)X) by series.
        let oracle = series_exp(&pauli_x().scale(C64::new(0.0, -FRAC_PI_2)), 40).scale(I);
        assert!(oracle.distance_max(&pauli_x()).unwrap() < 1e-14);
    }

    #[test]
    fn zero_angle_is_phase() {
        let u = target_u(0.7, 0.0, 1.2, -0.3);
        let expected = ComplexMatrix::identity(2).scale(C64::from_polar(1.0, 0.7));
        assert!(u.distance_max(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn z_rotation() {
        let u = target_u(0.0, PI, 0.0, 0.0);
        let expected = ComplexMatrix::from_diag(&[-I, I]);
        assert!(u.distance_max(&expected).unwrap() < 1e-15);
        let z = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]);
        let oracle = series_exp(&z.scale(C64::new(0.0, -FRAC_PI_2)), 40);
        assert!(oracle.distance_max(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn projector_and_rotation_forms_agree() {
        for k in 0..100 {
            let f = k as f64;
            let (d, t, a, b) = (0.3 * f - 7.0, 0.17 * f - 4.0, 0.41 * f, -0.29 * f + 2.0);
            let u = target_u(d, t, a, b);
            let r = rotation_form(d, t, a, b);
            assert!(u.distance_max(&r).unwrap() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn controlled_targets() {
        let cx = cnot();
        let expected = ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(cx, expected);
        assert_eq!(
            target_c2u(&ComplexMatrix::identity(2)).unwrap(),
            ComplexMatrix::identity(8)
        );
        let f = target_fredkin();
        assert_eq!(f[(0b101, 0b110)], ONE);
        assert_eq!(f[(0b111, 0b111)], ONE);
        assert_eq!(f[(0b101, 0b101)], ZERO);
        assert!(target_c1u(&ComplexMatrix::zeros(2, 2)).is_err());
        assert!(target_c1u(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn placing_on_default_roles_is_kron_with_identity() {
        let g = cnot();
        let placed = place_logical_gate(&g, &[1, 2], 3);
        assert_eq!(placed, g.kron(&ComplexMatrix::identity(2)));
    }

    #[test]
    fn permutation_matches_direct_placement() {
        let g = toffoli();
        let base = place_logical_gate(&g, &[1, 2, 3], 4);
        let perm = vec![3, 1, 4, 2];
        let placed = place_logical_gate(&g, &[3, 1, 4], 4);
        assert_eq!(permute_logical_operator(&base, &perm), placed);
    }

    #[test]
    fn dressed_basis_is_orthonormal() {
        let b = dressed_c1u_basis(1.3, -0.4);
        let gram = &b.dagger() * &b;
        assert!(gram.distance_max(&ComplexMatrix::identity(6)).unwrap() < 1e-15);
    }
}
