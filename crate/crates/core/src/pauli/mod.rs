//! Pauli-string algebra with a dense-matrix backend for small registers.

mod dense;
mod sum;
mod word;

pub use dense::{
    check_cap, eigensystem, eigensystem_in_subspace, evolution_matrix, matrix_distance_up_to_phase,
    DenseState, Matrix, DENSE_CAP, STATE_CAP,
};
pub use sum::{commutator, PauliString, PauliSum, DROP_TOL, HERMITIAN_TOL};
pub use word::{Pauli, PauliWord};
