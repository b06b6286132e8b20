use super::gate::Gate;
use crate::error::{Error, Result};

fn ladder(qubits: &[usize]) -> Vec<Gate> {
    qubits.windows(2).map(|w| Gate::Cnot { control: w[0], target: w[1] }).collect()
}

/// CNOT ladder, `RZ(angle)` on the last qubit, reversed ladder. Uses
/// `2(n-1)` CNOTs and equals `exp(-i angle/2 Z⊗…⊗Z)`.
pub fn build_multi_rz_ladder(angle: f64, qubits: &[usize]) -> Result<Vec<Gate>> {
    let last = *qubits.last().ok_or(Error::InvalidArgument("empty qubit list".into()))?;
    let up = ladder(qubits);
    let mut out = up.clone();
    out.push(Gate::Rz { qubit: last, angle });
    out.extend(up.into_iter().rev());
    Ok(out)
}

/// Parity measurement on `qubits` realized with a CNOT ladder: the branch
/// with outcome `k` applies `(I + (-1)^k Z⊗…⊗Z)/2`.
pub fn build_parity_instrument(qubits: &[usize], bit: usize) -> Result<Vec<Gate>> {
    let last = *qubits.last().ok_or(Error::InvalidArgument("empty qubit list".into()))?;
    let up = ladder(qubits);
    let mut out = up.clone();
    out.push(Gate::MeasureZ { qubit: last, bit });
    out.extend(up.into_iter().rev());
    Ok(out)
}

pub fn cnot_count(gates: &[Gate]) -> usize {
    gates.iter().filter(|g| g.is_cnot()).count()
}
