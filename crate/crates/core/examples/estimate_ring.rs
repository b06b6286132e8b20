//! Estimate the parity of a six-qubit ring circuit with two cut edges.

use qcut::circuit::Circuit;
use qcut::cutting::{CutPlan, Scheme};
use qcut::estimator::{estimate_expectation, estimate_uncut, exact_value};
use qcut::observable::Observable;

fn main() -> qcut::Result<()> {
    let c = Circuit::from_json(include_str!("../data/ring6.json"))?;
    let obs = Observable::parity(c.num_qubits);
    let f = |b: u64| obs.eval(b);
    let shots = 50_000;
    for scheme in [Scheme::Independent, Scheme::JointTeleport, Scheme::ParallelAncillaFree] {
        let plan = CutPlan::new(&c, scheme, 4)?;
        let e = estimate_expectation(&plan, &f, shots, 7)?;
        println!("{:<12} {:+.4} ± {:.4}  (kappa {:.3})", scheme.to_string(), e.mean, e.stderr, e.kappa);
    }
    let plan = CutPlan::new(&c, Scheme::JointTeleport, 4)?;
    let u = estimate_uncut(&plan.circuit, &f, shots, 7)?;
    println!("{:<12} {:+.4} ± {:.4}", "uncut", u.mean, u.stderr);
    println!("{:<12} {:+.4}", "exact", exact_value(&plan, &f)?);
    Ok(())
}
