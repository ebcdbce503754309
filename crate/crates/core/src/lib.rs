//! Split-evolution quantum phase estimation: Pauli algebra, circuit builders,
//! state-vector simulation, analytic resource models and phase post-processing.

pub mod circuit;
pub mod error;
pub mod ethylene;
pub mod experiment;
pub mod pauli;
pub mod post;
pub mod qpe;
pub mod resources;
pub mod scalar;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PauliSum64 = pauli::PauliSum<f64>;
pub type PauliString64 = pauli::PauliString<f64>;
pub type DenseState64 = pauli::DenseState<f64>;
pub type Matrix64 = pauli::Matrix<f64>;
pub type CostVectorF = resources::CostVector<f64>;
pub type CostVectorQ = resources::CostVector<num_rational::Ratio<i64>>;
