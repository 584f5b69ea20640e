use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("Hamming weight {k} out of range for {n} qubits")]
    WeightOutOfRange { n: usize, k: usize },

    #[error("index {k} out of range (max {max})")]
    IndexOutOfRange { k: usize, max: usize },

    #[error("coefficients not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}")]
    UnnormalizedCoefficients { norm_sqr: f64 },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    UnnormalizedState { norm_sqr: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("amplitude vector has length {len}, expected {expected}")]
    AmplitudeLength { len: usize, expected: usize },

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),

    #[error("state is not permutation symmetric")]
    NotSymmetric,

    #[error("operator is singular: |det| = {det_abs}")]
    SingularOperator { det_abs: f64 },

    #[error("Majorana reconstruction fidelity {fidelity} below required {required}")]
    ReconstructionFailed { fidelity: f64, required: f64 },

    #[error("restart count must be at least 1")]
    NoRestarts,

    #[error("trial count must be at least 1")]
    NoTrials,
}
