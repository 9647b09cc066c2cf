use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty matrix")]
    EmptyMatrix,

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("generator not skew-Hermitian (defect {defect:.3e})")]
    NotSkewHermitian { defect: f64 },

    #[error("matrix not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix not traceless (|trace| {trace:.3e})")]
    NotTraceless { trace: f64 },

    #[error("logarithm branch ambiguous (eigenphase {phase:.6} within guard of the cut)")]
    LogBranchAmbiguous { phase: f64 },

    #[error("logarithm inaccurate (round-trip residual {residual:.3e})")]
    LogInaccurate { residual: f64 },

    #[error("element does not belong to the representation's algebra")]
    AlgebraMismatch,

    #[error("invalid permutation of basis indices")]
    InvalidPermutation,

    #[error("root enumeration too large; use grouped profile (dim {dim} > cap {cap})")]
    RootEnumerationTooLarge { dim: usize, cap: usize },

    #[error("dense matrix cap exceeded; use grouped profile ({qubits} qubits > cap {cap})")]
    DenseCapExceeded { qubits: usize, cap: usize },

    #[error("algebra has an empty root set")]
    EmptyRootSystem,

    #[error("gate step exceeds cap (|s| = {s:.6} > s0 = {cap:.6})")]
    GateStepExceedsCap { s: f64, cap: f64 },

    #[error("cannot estimate c_rho: all sampled circuit errors are degenerate")]
    CannotEstimateCRho,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid Pauli term: {0}")]
    InvalidPauliTerm(String),

    #[error("invalid chain spec: {0}")]
    InvalidChainSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
