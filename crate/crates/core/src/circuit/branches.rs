//! Exact expansion of a circuit into measurement branches.
//!
//! Every branch carries the classical record that produced it and the Kraus
//! operators it induces on a chosen set of data qubits, after tracing out all
//! remaining qubits (which start in `|0⟩`). Summing `K ρ K†` over all
//! branches gives the circuit's channel on the data qubits.

use super::circuit::Circuit;
use super::gate::Gate;
use super::sim::{apply_linear, apply_pauli, project};
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, C64, ONE, ZERO};

const BRANCH_NORM_TOL: f64 = 1e-24;
const KRAUS_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Branch {
    pub bits: Vec<Option<u8>>,
    /// Operators on the data qubits, in the order given to [`expand_branches`].
    pub kraus: Vec<ComplexMatrix>,
}

impl Branch {
    /// `(-1)^(parity of the listed bits)`.
    pub fn sign(&self, sign_bits: &[usize]) -> f64 {
        let ones = sign_bits.iter().filter(|&&b| self.bits.get(b).copied().flatten() == Some(1)).count();
        if ones % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

struct Partial {
    bits: Vec<Option<u8>>,
    columns: Vec<Vec<C64>>,
}

fn column_norm(columns: &[Vec<C64>]) -> f64 {
    columns.iter().flat_map(|c| c.iter()).map(|z| z.norm_sqr()).sum()
}

pub fn expand_branches(c: &Circuit, data_qubits: &[usize]) -> Result<Vec<Branch>> {
    c.validate()?;
    let n = c.num_qubits;
    let k = data_qubits.len();
    if data_qubits.iter().any(|&q| q >= n) {
        return Err(Error::InvalidArgument("data qubit out of range".into()));
    }
    let data_index = |x: usize| -> usize {
        data_qubits
            .iter()
            .enumerate()
            .filter(|(j, _)| (x >> (k - 1 - j)) & 1 == 1)
            .map(|(_, &q)| 1usize << (n - 1 - q))
            .sum()
    };
    let columns = (0..1usize << k)
        .map(|x| {
            let mut col = vec![ZERO; 1 << n];
            col[data_index(x)] = ONE;
            col
        })
        .collect();
    let mut partials = vec![Partial { bits: vec![None; c.num_classical_bits], columns }];

    for g in &c.gates {
        match g {
            Gate::MeasureZ { qubit, bit } => {
                let mut next = Vec::with_capacity(partials.len() * 2);
                for p in partials {
                    for outcome in 0..2u8 {
                        let mut cols = p.columns.clone();
                        for col in &mut cols {
                            project(col, n, *qubit, outcome);
                        }
                        if column_norm(&cols) > BRANCH_NORM_TOL {
                            let mut bits = p.bits.clone();
                            bits[*bit] = Some(outcome);
                            next.push(Partial { bits, columns: cols });
                        }
                    }
                }
                partials = next;
            }
            Gate::ConditionedPauli { pauli, qubit, bit } => {
                for p in &mut partials {
                    if p.bits[*bit] == Some(1) {
                        for col in &mut p.columns {
                            apply_pauli(col, n, *pauli, *qubit);
                        }
                    }
                }
            }
            other => {
                for p in &mut partials {
                    for col in &mut p.columns {
                        apply_linear(col, n, other);
                    }
                }
            }
        }
    }

    let rest: Vec<usize> = (0..n).filter(|q| !data_qubits.contains(q)).collect();
    let rest_index = |y: usize| -> usize {
        rest.iter()
            .enumerate()
            .filter(|(j, _)| (y >> (rest.len() - 1 - j)) & 1 == 1)
            .map(|(_, &q)| 1usize << (n - 1 - q))
            .sum()
    };
    let dim = 1usize << k;
    Ok(partials
        .into_iter()
        .map(|p| {
            let kraus = (0..1usize << rest.len())
                .filter_map(|y| {
                    let offset = rest_index(y);
                    let mut m = ComplexMatrix::zeros(dim, dim);
                    for (x_in, col) in p.columns.iter().enumerate() {
                        for x_out in 0..dim {
                            m[(x_out, x_in)] = col[data_index(x_out) | offset];
                        }
                    }
                    (m.frobenius_norm() > KRAUS_NORM_TOL).then_some(m)
                })
                .collect();
            Branch { bits: p.bits, kraus }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{frobenius_distance, gates, kraus_to_superop, unitary_to_superop, SuperOperator};

    #[test]
    fn unitary_circuit_has_one_branch() {
        let mut c = Circuit::unpartitioned(2);
        c.push(Gate::H(0)).push(Gate::Cnot { control: 0, target: 1 });
        let b = expand_branches(&c, &[0, 1]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kraus.len(), 1);
        let u = crate::circuit::gates_unitary(2, &c.gates).unwrap();
        assert!(frobenius_distance(&b[0].kraus[0], &u).unwrap() < 1e-15);
    }

    #[test]
    fn measurement_branches_sum_to_dephasing() {
        let mut c = Circuit::unpartitioned(1);
        c.push(Gate::MeasureZ { qubit: 0, bit: 0 });
        let b = expand_branches(&c, &[0]).unwrap();
        assert_eq!(b.len(), 2);
        let all: Vec<_> = b.iter().flat_map(|x| x.kraus.clone()).collect();
        let deph = kraus_to_superop(&all).unwrap();
        let p0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let p1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(deph, kraus_to_superop(&[p0, p1]).unwrap());
    }

    #[test]
    fn ancilla_is_traced_out() {
        // CNOT onto an ancilla then measuring the ancilla dephases the data qubit
        let mut c = Circuit::unpartitioned(2);
        c.push(Gate::Cnot { control: 0, target: 1 }).push(Gate::MeasureZ { qubit: 1, bit: 0 });
        let b = expand_branches(&c, &[0]).unwrap();
        let all: Vec<_> = b.iter().flat_map(|x| x.kraus.clone()).collect();
        let ch = kraus_to_superop(&all).unwrap();
        let id = unitary_to_superop(&gates::id2()).unwrap();
        assert!(frobenius_distance(&ch, &id).unwrap() > 0.5);
        let _ = SuperOperator::identity(1);
    }
}
