use crate::circuit::{gates_unitary, Gate};
use crate::error::{Error, Result};
use crate::qpd::gamma_from_schmidt;
use crate::tensor::{choi_schmidt, ComplexMatrix};

/// `1 + 2|sin θ|`
pub fn gamma_single(theta: f64) -> f64 {
    1.0 + 2.0 * theta.sin().abs()
}

/// `Π_s (1 + 2|sin θ_s|)`
pub fn gamma_independent(thetas: &[f64]) -> f64 {
    thetas.iter().map(|&t| gamma_single(t)).product()
}

/// `2 Π_s (1 + |sin θ_s|) − 1`
pub fn gamma_joint(thetas: &[f64]) -> f64 {
    2.0 * thetas.iter().map(|t| 1.0 + t.sin().abs()).product::<f64>() - 1.0
}

/// `R_zz(θ_s)` on qubit pairs `(s, n + s)`; the first `n` qubits form side A.
pub fn rzz_layer_unitary(thetas: &[f64]) -> ComplexMatrix {
    let n = thetas.len();
    let gates: Vec<Gate> =
        thetas.iter().enumerate().map(|(s, &angle)| Gate::Rzz { qubits: [s, n + s], angle }).collect();
    gates_unitary(2 * n, &gates).expect("unitary gates")
}

/// `2(Σ c_j)² − 1` over the Schmidt coefficients of the Choi state of `u`
/// cut between its first `log2(dim_a)` qubits and the rest.
pub fn lower_bound_gamma(u: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    if u.rows() != dim_a * dim_b || !dim_a.is_power_of_two() || !dim_b.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: u.rows(), got: dim_a * dim_b });
    }
    let s = choi_schmidt(u, dim_a.trailing_zeros() as usize)?;
    let norm: f64 = s.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
    let c: Vec<f64> = s.coefficients.iter().map(|c| c / norm).collect();
    gamma_from_schmidt(&c)
}

/// Toffoli with controls on qubits 0, 1 and target on qubit 2.
pub fn toffoli() -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(8);
    u[(6, 6)] = crate::tensor::C64::new(0.0, 0.0);
    u[(7, 7)] = crate::tensor::C64::new(0.0, 0.0);
    u[(6, 7)] = crate::tensor::C64::new(1.0, 0.0);
    u[(7, 6)] = crate::tensor::C64::new(1.0, 0.0);
    u
}
