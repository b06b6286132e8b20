//! Gate cutting: decompositions of layers of `R_zz` gates into locally
//! executable terms, their exact verification and their binding to circuits.

mod decomposition;
mod gamma;
mod plan;
mod reconstruct;

pub use decomposition::{
    cut_independent, cut_joint_teleport, cut_parallel_ancilla_free, decompose, CutDecomposition, ExecutableTerm,
    Layout, Scheme, WEIGHT_DROP_TOL,
};
pub use gamma::{gamma_independent, gamma_joint, gamma_single, lower_bound_gamma, rzz_layer_unitary, toffoli};
pub use plan::{normalize, reduce_multiqubit_rotation, CutPlan, Fragment, GateGroup};
pub use reconstruct::{
    reconstruct, reconstruct_channel, reconstruction_error, term_circuit, SignedKrausSum, SUPEROP_QUBIT_LIMIT,
};
