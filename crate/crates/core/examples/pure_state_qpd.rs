//! Quasi-probability decomposition of an entangled two-qubit state into
//! product states, checked against the target density matrix.

use qcut::qpd::{pure_state_qpd, verify_qpd};
use qcut::tensor::{Statevector, C64};

fn main() -> qcut::Result<()> {
    let psi =
        Statevector::normalized(vec![C64::new(0.8, 0.0), C64::new(0.0, 0.1), C64::new(0.2, -0.3), C64::new(0.5, 0.0)])?;
    for alpha in [3, 4, 5] {
        let qpd = pure_state_qpd(&psi, 2, 2, alpha)?;
        let err = verify_qpd(&qpd, &psi.to_density())?;
        println!("alpha={alpha}: {} terms, kappa={:.12}, residual={err:.2e}", qpd.len(), qpd.kappa());
    }
    Ok(())
}
