//! Exact channel of a decomposition, summed over terms and measurement
//! branches with their outcome signs.

use rayon::prelude::*;

use crate::circuit::{expand_branches, Circuit};
use crate::error::{Error, Result};
use crate::tensor::{kron, ComplexMatrix, SuperOperator, C64};

use super::decomposition::{CutDecomposition, ExecutableTerm};

/// Largest number of data qubits for which a dense superoperator is built.
pub const SUPEROP_QUBIT_LIMIT: usize = 5;

/// `Σ_k w_k K_k ρ K_k†`
#[derive(Clone, Debug)]
pub struct SignedKrausSum {
    pub dim: usize,
    pub parts: Vec<(f64, ComplexMatrix)>,
}

impl SignedKrausSum {
    pub fn new(dim: usize) -> Self {
        Self { dim, parts: Vec::new() }
    }

    pub fn push(&mut self, weight: f64, kraus: ComplexMatrix) {
        self.parts.push((weight, kraus));
    }

    pub fn extend(&mut self, other: SignedKrausSum) {
        self.parts.extend(other.parts);
    }

    pub fn all_diagonal(&self) -> bool {
        self.parts.iter().all(|(_, k)| k.is_diagonal())
    }

    /// Column-stacking superoperator `Σ w conj(K) ⊗ K`.
    pub fn to_superop(&self) -> Result<SuperOperator> {
        let d = self.dim;
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for (w, k) in &self.parts {
            m.add_scaled(C64::new(*w, 0.0), &kron(&k.conj(), k))?;
        }
        SuperOperator::from_matrix(m)
    }

    /// For diagonal Kraus operators the channel multiplies `ρ_xy` entrywise by
    /// `M_xy = Σ w K_xx conj(K_yy)`; `None` otherwise.
    pub fn schur_symbol(&self) -> Option<ComplexMatrix> {
        if !self.all_diagonal() {
            return None;
        }
        let d = self.dim;
        let mut m = ComplexMatrix::zeros(d, d);
        for (w, k) in &self.parts {
            let diag = k.diagonal();
            for x in 0..d {
                let kx = diag[x] * *w;
                if kx == C64::new(0.0, 0.0) {
                    continue;
                }
                for y in 0..d {
                    m[(x, y)] += kx * diag[y].conj();
                }
            }
        }
        Some(m)
    }

    /// Frobenius distance in superoperator space to `ρ ↦ UρU†`.
    pub fn distance_to_unitary(&self, u: &ComplexMatrix) -> Result<f64> {
        if u.rows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.rows() });
        }
        if u.is_diagonal() {
            if let Some(m) = self.schur_symbol() {
                let du = u.diagonal();
                let target = ComplexMatrix::from_vec(
                    self.dim,
                    self.dim,
                    (0..self.dim * self.dim).map(|k| du[k / self.dim] * du[k % self.dim].conj()).collect(),
                )?;
                return Ok(m.sub(&target)?.frobenius_norm());
            }
        }
        let qubits = self.dim.trailing_zeros() as usize;
        if qubits > SUPEROP_QUBIT_LIMIT {
            return Err(Error::DimensionOverflow { qubits, limit: SUPEROP_QUBIT_LIMIT });
        }
        let target = crate::tensor::unitary_to_superop(u)?;
        Ok(self.to_superop()?.matrix().sub(target.matrix())?.frobenius_norm())
    }
}

/// Layout circuit of one term: ancilla preparation followed by every slot.
pub fn term_circuit(d: &CutDecomposition, t: &ExecutableTerm) -> Circuit {
    let mut c = Circuit::new(d.layout.num_qubits(), d.layout.partition());
    c.extend(t.prepare.iter().cloned());
    c.extend(t.slots.iter().flatten().cloned());
    c.num_classical_bits = c.num_classical_bits.max(d.num_classical_bits());
    c.sign_bits = t.sign_bits.clone();
    c
}

fn term_kraus(d: &CutDecomposition, t: &ExecutableTerm) -> Result<SignedKrausSum> {
    let c = term_circuit(d, t);
    let data: Vec<usize> = (0..d.layout.num_data()).collect();
    let mut out = SignedKrausSum::new(1 << data.len());
    for b in expand_branches(&c, &data)? {
        let w = t.weight * b.sign(&t.sign_bits);
        for k in b.kraus {
            out.push(w, k);
        }
    }
    Ok(out)
}

/// Signed Kraus form of the whole decomposition on the data qubits
/// `a(0..n), b(0..n)`, ancillas traced out.
pub fn reconstruct(d: &CutDecomposition) -> Result<SignedKrausSum> {
    let parts: Vec<SignedKrausSum> = d.terms.par_iter().map(|t| term_kraus(d, t)).collect::<Result<_>>()?;
    let mut out = SignedKrausSum::new(1 << d.layout.num_data());
    for p in parts {
        out.extend(p);
    }
    Ok(out)
}

pub fn reconstruct_channel(d: &CutDecomposition) -> Result<SuperOperator> {
    let qubits = d.layout.num_data();
    if qubits > SUPEROP_QUBIT_LIMIT {
        return Err(Error::DimensionOverflow { qubits, limit: SUPEROP_QUBIT_LIMIT });
    }
    if d.terms.is_empty() {
        return Ok(SuperOperator::zeros(qubits));
    }
    reconstruct(d)?.to_superop()
}

/// Distance between the reconstructed channel and the exact gate layer.
pub fn reconstruction_error(d: &CutDecomposition) -> Result<f64> {
    reconstruct(d)?.distance_to_unitary(&super::gamma::rzz_layer_unitary(&d.thetas))
}

#[cfg(test)]
mod tests {
    use super::super::decomposition::*;
    use super::super::gamma::rzz_layer_unitary;
    use super::*;
    use crate::tensor::{frobenius_distance, unitary_to_superop};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn single_gate_schemes() {
        for &theta in &[FRAC_PI_2, 0.3, -1.2, 2.9] {
            let target = unitary_to_superop(&rzz_layer_unitary(&[theta])).unwrap();
            for d in [
                cut_parallel_ancilla_free(&[theta]).unwrap(),
                cut_joint_teleport(&[theta], 4).unwrap(),
                cut_joint_teleport(&[theta], 3).unwrap(),
                cut_independent(&[theta]).unwrap(),
            ] {
                let ch = reconstruct_channel(&d).unwrap();
                assert!(frobenius_distance(&ch, &target).unwrap() < 1e-9, "{:?} at {theta}", d.scheme);
                assert!((d.kappa() - d.gamma).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parallel_single_gate_shape() {
        let d = cut_parallel_ancilla_free(&[FRAC_PI_2]).unwrap();
        assert_eq!(d.terms.len(), 6);
        assert!((d.gamma - 3.0).abs() < 1e-12);
        let t = 0.8;
        let d = cut_parallel_ancilla_free(&[t]).unwrap();
        let diag: Vec<f64> = d
            .terms
            .iter()
            .filter(|t| t.sign_bits.is_empty() && t.label.starts_with('Z') && !t.label.contains('['))
            .map(|t| t.weight)
            .collect();
        assert!((diag[0] - (t / 2.0).cos().powi(2)).abs() < 1e-15);
        assert!((diag[1] - (t / 2.0).sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn two_gates_all_schemes() {
        let thetas = [0.7, -2.2];
        for d in [
            cut_parallel_ancilla_free(&thetas).unwrap(),
            cut_joint_teleport(&thetas, 4).unwrap(),
            cut_independent(&thetas).unwrap(),
        ] {
            assert!(reconstruction_error(&d).unwrap() < 1e-9, "{:?}", d.scheme);
        }
    }

    #[test]
    fn zero_angle_single_term() {
        for d in [cut_parallel_ancilla_free(&[0.0]).unwrap(), cut_joint_teleport(&[0.0], 4).unwrap()] {
            assert_eq!(d.terms.len(), 1);
            assert_eq!(d.gamma, 1.0);
        }
        assert_eq!(cut_parallel_ancilla_free(&[0.0, 0.0, 0.0]).unwrap().terms.len(), 1);
    }

    #[test]
    fn channel_products_count_four_to_the_n() {
        for n in 1..=4 {
            let d = cut_parallel_ancilla_free(&vec![0.9; n]).unwrap();
            assert_eq!(d.channel_term_count(), 1 << (2 * n));
        }
    }

    #[test]
    fn joint_term_count() {
        let d = cut_joint_teleport(&[FRAC_PI_2, FRAC_PI_2], 4).unwrap();
        assert_eq!(d.terms.len(), 52);
        assert!((d.gamma - 7.0).abs() < 1e-12);
    }

    #[test]
    fn empty_decomposition_is_zero() {
        let mut d = cut_parallel_ancilla_free(&[PI / 3.0]).unwrap();
        d.terms.clear();
        assert_eq!(reconstruct_channel(&d).unwrap(), SuperOperator::zeros(2));
    }

    #[test]
    fn schur_and_dense_routes_agree() {
        let d = cut_parallel_ancilla_free(&[0.4, 1.3]).unwrap();
        let k = reconstruct(&d).unwrap();
        let u = rzz_layer_unitary(&d.thetas);
        let schur = k.distance_to_unitary(&u).unwrap();
        let dense = frobenius_distance(&k.to_superop().unwrap(), &unitary_to_superop(&u).unwrap()).unwrap();
        assert!((schur - dense).abs() < 1e-12);
    }
}
