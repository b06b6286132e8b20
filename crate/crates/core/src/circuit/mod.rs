mod branches;
#[allow(clippy::module_inception)]
mod circuit;
mod gate;
mod ladder;
mod sim;

pub use branches::{expand_branches, Branch};
pub use circuit::{Circuit, Partition};
pub use gate::{embed, gates_unitary, Gate, Pauli};
pub use ladder::{build_multi_rz_ladder, build_parity_instrument, cnot_count};
pub use sim::{
    exact_expectation, execute, expectation_of, index_to_bits, sample_index, simulate_statevector, ShotRecord,
};
pub mod teleport;
