//! Gate teleportation of R_zz(θ), physical and virtual.

use qcut::circuit::teleport::{resource_state, teleportation_circuit, virtual_teleportation_circuit};
use qcut::circuit::{expand_branches, gates_unitary, Gate};
use qcut::tensor::{frobenius_distance, kraus_to_superop, unitary_to_superop, ComplexMatrix, SuperOperator};

fn rzz(theta: f64) -> SuperOperator {
    unitary_to_superop(&gates_unitary(2, &[Gate::Rzz { qubits: [0, 1], angle: theta }]).unwrap()).unwrap()
}

// every outcome pair has probability 1/4
fn branch(kraus: &[ComplexMatrix]) -> SuperOperator {
    kraus_to_superop(&kraus.iter().map(|k| k.scale_real(2.0)).collect::<Vec<_>>()).unwrap()
}

fn main() -> qcut::Result<()> {
    let theta = 0.9;
    println!("physical teleportation with corrections:");
    for b in expand_branches(&teleportation_circuit(theta), &[0, 3])? {
        let err = frobenius_distance(&branch(&b.kraus), &rzz(theta))?;
        println!("  bits {:?}: distance to R_zz(θ) {err:.1e}", b.bits);
    }
    println!("virtual teleportation, no corrections:");
    for b in expand_branches(&virtual_teleportation_circuit(&resource_state(theta)), &[0, 3])? {
        let plus = frobenius_distance(&branch(&b.kraus), &rzz(theta))?;
        let minus = frobenius_distance(&branch(&b.kraus), &rzz(-theta))?;
        println!("  bits {:?}: distance to R_zz(+θ) {plus:.1e}, to R_zz(-θ) {minus:.1e}", b.bits);
    }
    Ok(())
}
