//! Split one decomposition term into the two circuits each side runs.

use qcut::circuit::Circuit;
use qcut::cutting::{CutPlan, Scheme};

fn main() -> qcut::Result<()> {
    let c = Circuit::from_json(include_str!("../data/cnot_pair.json"))?;
    let plan = CutPlan::new(&c, Scheme::JointTeleport, 3)?;
    println!("{} terms, gamma {:.3}", plan.decomposition.terms.len(), plan.decomposition.gamma);
    let term = &plan.decomposition.terms[plan.decomposition.terms.len() - 1];
    let (a, b) = plan.fragments(term)?;
    println!("term {} weight {:+.4}, sign bits {:?}", term.label, term.weight, term.sign_bits);
    for (name, f) in [("A", &a), ("B", &b)] {
        println!("--- {name}: data qubits {:?}, bits {:?}", f.data_qubits, f.bits);
        for g in &f.circuit.gates {
            println!("  {g:?}");
        }
    }
    Ok(())
}
