//! Truncated bosonic Fock space over a finite mode set.
//!
//! The truncation keeps every occupation tuple with total particle number at
//! most `N`. Operators are stored sparse and densified (up to
//! [`DENSE_CAP`]) for eigensolves.

mod basis;
mod linalg;
mod operator;
mod ops;
mod thermal;

pub use basis::{fock_dimension, FockBasis, DEFAULT_MAX_DIMENSION};
pub use linalg::{
    herm_expm, hermitian_pencil, hermiticity_defect, HermitianEigen, PencilSolution,
    MAX_GRAM_CONDITION,
};
pub use operator::{
    block_deviation, column_leakage, DenseOperator, FockOperator, FockVector, DENSE_CAP,
};
pub use ops::{
    annihilation, creation, dgamma, exp_annihilation, exp_creation, exponential_tail,
    exponential_vector, field, number_operator, weyl_matrix, WeylMatrix,
};
pub use thermal::{
    gibbs_trace_expectation, heisenberg_conjugate, SpectralHamiltonian, Truncated,
};
