use thiserror::Error;

/// Which state invariant a candidate matrix violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateViolation {
    #[error("shape invariant violated: {0}")]
    Shape(String),
    #[error("hermiticity invariant violated: relative deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("unit-trace invariant violated: trace = {trace}")]
    TraceNotUnit { trace: f64 },
    #[error("positivity invariant violated: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("normalization invariant violated: squared norm of amplitudes = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(#[from] StateViolation),
    #[error("Pauli coefficient has imaginary part {imag:.3e}; input is not Hermitian")]
    NonHermitianInput { imag: f64 },
    #[error("reconstructed matrix is not a state: {0}")]
    NotAState(StateViolation),
    #[error("operation needs {expected} qubit(s), got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("qubit count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("index {index} out of range for {n} qubit(s)")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("qubit subset must be strictly increasing")]
    UnorderedKeepSet,
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("Pauli axis {0} is not in 0..=3")]
    InvalidAxis(u8),
    #[error("expected {expected} Pauli coefficients, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("state has a vanishing Bloch vector; every SU(2) element commutes with it")]
    DegenerateState,
    #[error("SU(2) parameter {name} = {value} outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("matrix for qubit {qubit} is not unitary (deviation {deviation:.3e})")]
    NonUnitaryInput { qubit: usize, deviation: f64 },
    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("brute-force search supports at most {max} qubits, got {n}")]
    TooManyQubits { n: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
