//! Reduce a Z rotation spanning both sides to local CNOT ladders around one
//! cut R_zz.

use qcut::circuit::{gates_unitary, Gate, Partition};
use qcut::cutting::reduce_multiqubit_rotation;

fn main() -> qcut::Result<()> {
    use Partition::{A, B};
    let partition = [A, A, A, B, B];
    let gate = Gate::MultiRz { qubits: vec![0, 1, 2, 3, 4], angle: 0.8 };
    let (before, core, after) = reduce_multiqubit_rotation(&gate, &partition)?;
    println!("before: {before:?}\ncore:   {core:?}\nafter:  {after:?}");
    let mut seq = before.clone();
    seq.push(core);
    seq.extend(after);
    let diff = gates_unitary(5, &seq).unwrap().sub(&gates_unitary(5, &[gate]).unwrap())?.frobenius_norm();
    println!("unitary difference {diff:.1e}");
    Ok(())
}
