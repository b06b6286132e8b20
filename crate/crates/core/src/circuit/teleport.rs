//! Gate teleportation of `R_zz(θ)`.
//!
//! Both protocols share one four-qubit layout: data qubit `a` and ancilla
//! `a'` on side A, ancilla `b'` and data qubit `b` on side B.

use super::circuit::{Circuit, Partition};
use super::gate::{Gate, Pauli};
use crate::tensor::{Statevector, C64};

pub const DATA_A: usize = 0;
pub const ANCILLA_A: usize = 1;
pub const ANCILLA_B: usize = 2;
pub const DATA_B: usize = 3;
pub const BIT_K: usize = 0;
pub const BIT_L: usize = 1;

fn layout() -> Circuit {
    Circuit::new(4, vec![Partition::A, Partition::A, Partition::B, Partition::B])
}

/// `cos(θ/2)|00⟩ + sin(θ/2)|11⟩`
pub fn resource_state(theta: f64) -> Statevector {
    let (s, c) = (theta / 2.0).sin_cos();
    Statevector::from_real(&[c, 0.0, 0.0, s]).expect("normalized")
}

/// Teleportation with a Bell pair and two-way classical corrections: `k`
/// from measuring `a'` flips `b'`, `l` from measuring `b'` in the X basis
/// phases `a`.
pub fn teleportation_circuit(theta: f64) -> Circuit {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
    let mut c = layout();
    c.extend([
        Gate::PrepareState { register: vec![ANCILLA_A, ANCILLA_B], amplitudes: bell },
        Gate::Cnot { control: DATA_A, target: ANCILLA_A },
        Gate::MeasureZ { qubit: ANCILLA_A, bit: BIT_K },
        Gate::ConditionedPauli { pauli: Pauli::X, qubit: ANCILLA_B, bit: BIT_K },
        Gate::Rzz { qubits: [ANCILLA_B, DATA_B], angle: theta },
        Gate::H(ANCILLA_B),
        Gate::MeasureZ { qubit: ANCILLA_B, bit: BIT_L },
        Gate::ConditionedPauli { pauli: Pauli::Z, qubit: DATA_A, bit: BIT_L },
    ]);
    c
}

/// A-side block: rotate the prepared ancilla with `H`, copy the data qubit's
/// Z value into it and measure.
pub fn virtual_block_a(data: usize, ancilla: usize, bit: usize) -> Vec<Gate> {
    vec![Gate::H(ancilla), Gate::Cnot { control: data, target: ancilla }, Gate::MeasureZ { qubit: ancilla, bit }]
}

/// B-side block: as on A with an extra `S†` ahead of the `H`.
pub fn virtual_block_b(data: usize, ancilla: usize, bit: usize) -> Vec<Gate> {
    vec![
        Gate::Sdg(ancilla),
        Gate::H(ancilla),
        Gate::Cnot { control: data, target: ancilla },
        Gate::MeasureZ { qubit: ancilla, bit },
    ]
}

/// The two local halves of a virtual teleportation with the ancillas
/// initialized to the given single-qubit states.
pub fn build_virtual_teleportation_fragment_pair(
    ancilla_prep_a: &Statevector,
    ancilla_prep_b: &Statevector,
) -> (Vec<Gate>, Vec<Gate>) {
    let mut a =
        vec![Gate::PrepareState { register: vec![ANCILLA_A], amplitudes: ancilla_prep_a.amplitudes().to_vec() }];
    a.extend(virtual_block_a(DATA_A, ANCILLA_A, BIT_K));
    let mut b =
        vec![Gate::PrepareState { register: vec![ANCILLA_B], amplitudes: ancilla_prep_b.amplitudes().to_vec() }];
    b.extend(virtual_block_b(DATA_B, ANCILLA_B, BIT_L));
    (a, b)
}

/// Virtual teleportation fed with the entangled ancilla state `resource`.
pub fn virtual_teleportation_circuit(resource: &Statevector) -> Circuit {
    let mut c = layout();
    c.push(Gate::PrepareState { register: vec![ANCILLA_A, ANCILLA_B], amplitudes: resource.amplitudes().to_vec() });
    c.extend(virtual_block_a(DATA_A, ANCILLA_A, BIT_K));
    c.extend(virtual_block_b(DATA_B, ANCILLA_B, BIT_L));
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::expand_branches;
    use crate::tensor::{frobenius_distance, gates, kraus_to_superop, unitary_to_superop};
    use std::f64::consts::PI;

    fn branch_channel(kraus: &[crate::tensor::ComplexMatrix]) -> crate::tensor::SuperOperator {
        // each outcome occurs with probability 1/4
        let scaled: Vec<_> = kraus.iter().map(|k| k.scale_real(2.0)).collect();
        kraus_to_superop(&scaled).unwrap()
    }

    #[test]
    fn bell_teleportation_every_branch() {
        for t in 0..20 {
            let theta = -PI + 2.0 * PI * t as f64 / 19.0;
            let c = teleportation_circuit(theta);
            assert!(!c.is_communication_free());
            let target = unitary_to_superop(&gates::rzz(theta)).unwrap();
            let branches = expand_branches(&c, &[DATA_A, DATA_B]).unwrap();
            assert_eq!(branches.len(), 4);
            for b in branches {
                assert!(frobenius_distance(&branch_channel(&b.kraus), &target).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn virtual_teleportation_sign_depends_on_outcomes() {
        for &theta in &[0.3, PI / 2.0, 2.0, -1.1] {
            let c = virtual_teleportation_circuit(&resource_state(theta));
            assert!(c.is_communication_free());
            let plus = unitary_to_superop(&gates::rzz(theta)).unwrap();
            let minus = unitary_to_superop(&gates::rzz(-theta)).unwrap();
            for b in expand_branches(&c, &[DATA_A, DATA_B]).unwrap() {
                let ch = branch_channel(&b.kraus);
                let target = if b.bits[BIT_K] == b.bits[BIT_L] { &plus } else { &minus };
                assert!(frobenius_distance(&ch, target).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_angle_is_identity_everywhere() {
        let c = virtual_teleportation_circuit(&resource_state(0.0));
        let id = unitary_to_superop(&crate::tensor::ComplexMatrix::identity(4)).unwrap();
        for b in expand_branches(&c, &[DATA_A, DATA_B]).unwrap() {
            assert!(frobenius_distance(&branch_channel(&b.kraus), &id).unwrap() < 1e-12);
        }
    }

    #[test]
    fn fragment_pair_is_local() {
        let plus = Statevector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        let (a, b) = build_virtual_teleportation_fragment_pair(&plus, &Statevector::zero_state(1));
        let mut c = layout();
        c.extend(a.clone()).extend(b.clone());
        c.validate().unwrap();
        assert!(c.cross_partition_gates().is_empty());
        assert!(a.iter().flat_map(|g| g.qubits()).all(|q| q < 2));
        assert!(b.iter().flat_map(|g| g.qubits()).all(|q| q >= 2));
    }
}
