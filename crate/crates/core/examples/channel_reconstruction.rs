//! Rebuild a layer of cut R_zz gates from its decomposition terms and compare
//! with the exact channel.

use qcut::cutting::{decompose, reconstruction_error, Scheme};

fn main() -> qcut::Result<()> {
    let thetas = [0.7, -1.9];
    for scheme in [Scheme::Independent, Scheme::JointTeleport, Scheme::ParallelAncillaFree] {
        let d = decompose(scheme, &thetas, 4)?;
        println!(
            "{:<12} gamma={:.6} terms={:<4} ancillas/side={} error={:.1e}",
            scheme.to_string(),
            d.gamma,
            d.terms.len(),
            d.ancillas_per_partition(),
            reconstruction_error(&d)?
        );
    }
    Ok(())
}
