//! Dense complex linear algebra: matrices, states, superoperators, SVD and
//! Schmidt decompositions.

mod matrix;
mod schmidt;
mod state;
mod svd;

pub use matrix::{frobenius_distance, gates, kron, ComplexMatrix, C64, UNITARY_TOL};
pub(crate) use matrix::{I, ONE, ZERO};
pub use schmidt::{choi_schmidt, choi_state, schmidt_decompose, SchmidtDecomposition, SCHMIDT_PRUNE_TOL};
pub use state::{
    kraus_to_superop, unitary_to_superop, unvectorize, vectorize, DensityMatrix, Statevector, SuperOperator, STATE_TOL,
};
pub use svd::{svd, Svd};
