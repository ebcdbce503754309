use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{n} qubits exceeds the cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("operator is not Hermitian (max imaginary coefficient {0:e})")]
    NonHermitian(f64),
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("Pauli string has no letters")]
    EmptyPauli,
    #[error("control qubit {0} overlaps the target operands")]
    ControlOverlap(usize),
    #[error("register layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("measurement or reset encountered in unitary evolution")]
    MeasurementInEvolve,
    #[error("mid-circuit measurement on qubit {qubit} is not deterministic (p1 = {p1:e})")]
    NondeterministicMeasurement { qubit: usize, p1: f64 },
    #[error("vanishing denominator <H1> = {0:e}")]
    VanishingDenominator(f64),
    #[error("no records survived filtering")]
    EmptyFilter,
    #[error("empty input")]
    EmptyInput,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
