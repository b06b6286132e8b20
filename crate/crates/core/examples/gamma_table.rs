//! γ of independent and joint cuts of n parallel R_zz gates.

use qcut::cutting::{gamma_independent, gamma_joint, lower_bound_gamma, rzz_layer_unitary};

fn main() -> qcut::Result<()> {
    println!("{:>2} {:>6} {:>12} {:>12} {:>12}", "n", "theta", "independent", "joint", "lower");
    for theta in [0.3, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2] {
        for n in 1..=3 {
            let t = vec![theta; n];
            let lower = lower_bound_gamma(&rzz_layer_unitary(&t), 1 << n, 1 << n)?;
            println!("{n:>2} {theta:>6.3} {:>12.6} {:>12.6} {lower:>12.6}", gamma_independent(&t), gamma_joint(&t));
        }
    }
    Ok(())
}
