//! Choi-state lower bound on γ for a Toffoli cut between its first control and
//! the other two qubits, and for an R_zz layer.

use qcut::cutting::{gamma_joint, lower_bound_gamma, rzz_layer_unitary, toffoli};

fn main() -> qcut::Result<()> {
    println!("toffoli: {:.15}", lower_bound_gamma(&toffoli(), 2, 4)?);
    let t = [0.4, 1.1];
    println!(
        "rzz layer {t:?}: bound {:.15}, joint cut {:.15}",
        lower_bound_gamma(&rzz_layer_unitary(&t), 4, 4)?,
        gamma_joint(&t)
    );
    Ok(())
}
