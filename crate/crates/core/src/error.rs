use thiserror::Error;

pub type Result<T> = std::result::Result<T, HbacError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HbacError {
    #[error("register of {qubits} qubits exceeds the maximum of {max} populations")]
    RegisterTooLarge { qubits: usize, max: usize },

    #[error("population vector has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("population {index} is negative ({value:e})")]
    NegativePopulation { index: usize, value: f64 },

    #[error("populations sum to {sum:.17}, not 1")]
    NotNormalized { sum: f64 },

    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("basis index {index} out of range for {len} populations")]
    BasisIndexOutOfRange { index: usize, len: usize },

    #[error("cannot trace out the only qubit of a one-qubit register")]
    TraceSingleQubit,

    #[error("bath polarization must lie in [0, 1), got {0}")]
    InvalidBathPolarization(f64),

    #[error("permutation is not a bijection on {len} indices")]
    NotBijective { len: usize },

    #[error("state reset needs two distinct basis indices, got {0} twice")]
    SamePair(usize),

    #[error("equilibrium ratio must be finite and > 0, got {0}")]
    InvalidRatio(f64),

    #[error("invalid protocol configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid relaxation parameters: {0}")]
    InvalidParams(String),

    #[error("time step {dt} exceeds the stability bound {bound}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("no convergence after {iterations} rounds (last L1 change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("reports are not comparable: {0}")]
    Incompatible(String),
}
