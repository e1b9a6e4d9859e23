use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("qubit index {index} outside 1..={n_qubits}")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {index} appears more than once in a single term")]
    DuplicateQubit { index: usize },

    #[error("{n_qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e} > {tol:.1e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not unitary (residual {residual:.3e} > {tol:.1e})")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:.3e})")]
    EigenNotConverged { sweeps: usize, off_diagonal: f64 },

    #[error("Hamming weight {weight} invalid for {n_physical} physical qubits")]
    InvalidWeight { weight: usize, n_physical: usize },

    #[error("unsupported encoding size: {0} logical qubits")]
    UnsupportedEncodingSize(usize),

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("gate parameters inconsistent with gate kind: {0}")]
    InconsistentParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("basis state {index} is not contained in the working frame")]
    OutsideFrame { index: usize },

    #[error("integration failure: {0}")]
    Integration(String),
}
