//! Oracles and random generators shared by the integration tests. Everything
//! here is written independently of the library's own gate formulas.

#![allow(dead_code)]

use std::f64::consts::PI;

use hqc_core::{ComplexMatrix, GateParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

pub fn random_params(rng: &mut ChaCha8Rng) -> GateParams {
    let omega = rng.random_range(0.3..3.0);
    GateParams::new(omega, angle(rng), angle(rng), angle(rng), angle(rng)).unwrap()
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + &a.dagger()).scale_real(0.5)
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

/// Truncated Taylor series `Σ_{k<terms} A^k / k!`.
pub fn series_exp(a: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let mut sum = ComplexMatrix::identity(a.rows());
    let mut term = ComplexMatrix::identity(a.rows());
    for k in 1..terms {
        term = (&term * a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

/// `cos(α/2)|0⟩ + e^{iβ} sin(α/2)|1⟩` and its orthogonal partner.
pub fn plus_minus(alpha: f64, beta: f64) -> ([C64; 2], [C64; 2]) {
    let (ca, sa) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let e = C64::from_polar(1.0, beta);
    ([c(ca), e * sa], [e.conj() * sa, c(-ca)])
}

/// Single-qubit gate with eigenphase `π + π sinξ` on `|+⟩` and
/// `π + π sinγ` on `|−⟩`.
pub fn oracle_u(p: &GateParams) -> ComplexMatrix {
    let (plus, minus) = plus_minus(p.alpha, p.beta);
    let lo = C64::from_polar(1.0, PI + PI * p.xi.sin());
    let hi = C64::from_polar(1.0, PI + PI * p.gamma.sin());
    ComplexMatrix::from_fn(2, 2, |i, j| {
        lo * plus[i] * plus[j].conj() + hi * minus[i] * minus[j].conj()
    })
}

/// Identity with the trailing 2×2 block replaced by `u`.
pub fn controlled_oracle(u: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i >= dim - 2 && j >= dim - 2 {
            u[(i - (dim - 2), j - (dim - 2))]
        } else if i == j {
            c(1.0)
        } else {
            c(0.0)
        }
    })
}

fn permutation_matrix(dim: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| if image(j) == i { c(1.0) } else { c(0.0) })
}

pub fn cnot_literal() -> ComplexMatrix {
    permutation_matrix(4, |x| match x {
        2 => 3,
        3 => 2,
        x => x,
    })
}

pub fn toffoli_literal() -> ComplexMatrix {
    permutation_matrix(8, |x| match x {
        6 => 7,
        7 => 6,
        x => x,
    })
}

pub fn fredkin_literal() -> ComplexMatrix {
    permutation_matrix(8, |x| match x {
        5 => 6,
        6 => 5,
        x => x,
    })
}

/// `|Tr(V†U)| / d`, computed entrywise.
pub fn trace_fidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let d = u.rows();
    let mut t = c(0.0);
    for i in 0..d {
        for j in 0..d {
            t += v[(j, i)].conj() * u[(j, i)];
        }
    }
    t.norm() / d as f64
}

/// Parses a bitstring into a basis index, qubit 1 first.
pub fn bits(s: &str) -> usize {
    usize::from_str_radix(s, 2).unwrap()
}

pub fn to_nalgebra(m: &ComplexMatrix) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}
