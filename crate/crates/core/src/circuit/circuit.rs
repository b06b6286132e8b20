use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::gate::{Gate, Pauli};
use crate::error::{Error, Result};
use crate::tensor::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    A,
    B,
}

impl Partition {
    pub fn other(self) -> Partition {
        match self {
            Partition::A => Partition::B,
            Partition::B => Partition::A,
        }
    }
}

/// Ordered gate list over `num_qubits` qubits, each tagged with a partition.
///
/// `sign_bits` lists classical bits whose measured parity multiplies the
/// shot's sign factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub partition: Vec<Partition>,
    pub gates: Vec<Gate>,
    pub num_classical_bits: usize,
    pub sign_bits: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize, partition: Vec<Partition>) -> Self {
        Self { num_qubits, partition, gates: Vec::new(), num_classical_bits: 0, sign_bits: Vec::new() }
    }

    /// All qubits in partition A.
    pub fn unpartitioned(num_qubits: usize) -> Self {
        Self::new(num_qubits, vec![Partition::A; num_qubits])
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        if let Some(bit) = gate.classical_bit() {
            self.num_classical_bits = self.num_classical_bits.max(bit + 1);
        }
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        for g in gates {
            self.push(g);
        }
        self
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::MeasureZ { .. } | Gate::ConditionedPauli { .. }))
    }

    pub fn qubits_in(&self, p: Partition) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.partition[q] == p).collect()
    }

    /// Checks index ranges, distinctness, normalized fresh-register
    /// preparations, write-once classical bits and read-after-write
    /// conditioned gates.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedCircuit(msg));
        if self.partition.len() != self.num_qubits {
            return bad(format!("partition has {} entries for {} qubits", self.partition.len(), self.num_qubits));
        }
        let mut touched = vec![false; self.num_qubits];
        let mut written = vec![false; self.num_classical_bits];
        for (idx, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            if qs.is_empty() {
                return bad(format!("gate {idx} acts on no qubits"));
            }
            for (k, &q) in qs.iter().enumerate() {
                if q >= self.num_qubits {
                    return bad(format!("gate {idx}: qubit {q} out of range"));
                }
                if qs[..k].contains(&q) {
                    return bad(format!("gate {idx}: repeated qubit {q}"));
                }
            }
            match g {
                Gate::PrepareState { register, amplitudes } => {
                    if amplitudes.len() != 1 << register.len() {
                        return bad(format!(
                            "gate {idx}: {} amplitudes for {} qubits",
                            amplitudes.len(),
                            register.len()
                        ));
                    }
                    if !g.prep_is_normalized() {
                        return bad(format!("gate {idx}: preparation amplitudes not normalized"));
                    }
                    if register.iter().any(|&q| touched[q]) {
                        return bad(format!("gate {idx}: preparation on a qubit that was already used"));
                    }
                }
                Gate::MeasureZ { bit, .. } => {
                    if *bit >= self.num_classical_bits {
                        return bad(format!("gate {idx}: classical bit {bit} out of range"));
                    }
                    if written[*bit] {
                        return bad(format!("gate {idx}: classical bit {bit} written twice"));
                    }
                    written[*bit] = true;
                }
                Gate::ConditionedPauli { bit, .. } => {
                    if *bit >= self.num_classical_bits || !written[*bit] {
                        return bad(format!("gate {idx}: reads classical bit {bit} before it is measured"));
                    }
                }
                Gate::Rz { angle, .. } | Gate::Rzz { angle, .. } | Gate::MultiRz { angle, .. }
                    if !angle.is_finite() =>
                {
                    return bad(format!("gate {idx}: non-finite angle"));
                }
                _ => {}
            }
            for q in qs {
                touched[q] = true;
            }
        }
        for &b in &self.sign_bits {
            if b >= self.num_classical_bits {
                return bad(format!("sign bit {b} out of range"));
            }
        }
        Ok(())
    }

    /// Qubit that writes each classical bit.
    fn bit_sources(&self) -> HashMap<usize, usize> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::MeasureZ { qubit, bit } => Some((*bit, *qubit)),
                _ => None,
            })
            .collect()
    }

    /// No conditioned gate reads a bit measured in the other partition.
    pub fn check_communication_free(&self) -> Result<()> {
        let sources = self.bit_sources();
        for (idx, g) in self.gates.iter().enumerate() {
            if let Gate::ConditionedPauli { qubit, bit, .. } = g {
                let src = sources
                    .get(bit)
                    .ok_or_else(|| Error::MalformedCircuit(format!("gate {idx}: bit {bit} has no source")))?;
                if self.partition[*src] != self.partition[*qubit] {
                    return Err(Error::MalformedCircuit(format!(
                        "gate {idx}: conditioned on bit {bit} measured in the other partition"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_communication_free(&self) -> bool {
        self.check_communication_free().is_ok()
    }

    /// Indices of gates with qubits in both partitions.
    pub fn cross_partition_gates(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                let qs = g.qubits();
                qs.iter().any(|&q| self.partition[q] == Partition::A)
                    && qs.iter().any(|&q| self.partition[q] == Partition::B)
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CircuitJson = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitJson::from(self))?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitJson {
    num_qubits: usize,
    partition: Vec<Partition>,
    gates: Vec<GateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_classical_bits: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GateJson {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pauli: Option<Pauli>,
    /// `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
}

impl GateJson {
    fn plain(kind: &str, qubits: Vec<usize>) -> Self {
        Self { kind: kind.into(), qubits, angle: None, bit: None, pauli: None, amplitudes: None }
    }
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        let qubits = g.qubits();
        match g {
            Gate::H(_) => Self::plain("h", qubits),
            Gate::S(_) => Self::plain("s", qubits),
            Gate::Sdg(_) => Self::plain("sdg", qubits),
            Gate::X(_) => Self::plain("x", qubits),
            Gate::Z(_) => Self::plain("z", qubits),
            Gate::Rz { angle, .. } => Self { angle: Some(*angle), ..Self::plain("rz", qubits) },
            Gate::Rzz { angle, .. } => Self { angle: Some(*angle), ..Self::plain("rzz", qubits) },
            Gate::MultiRz { angle, .. } => Self { angle: Some(*angle), ..Self::plain("mrz", qubits) },
            Gate::Cnot { .. } => Self::plain("cnot", qubits),
            Gate::PrepareState { amplitudes, .. } => Self {
                amplitudes: Some(amplitudes.iter().map(|z| [z.re, z.im]).collect()),
                ..Self::plain("prep", qubits)
            },
            Gate::MeasureZ { bit, .. } => Self { bit: Some(*bit), ..Self::plain("measure", qubits) },
            Gate::ConditionedPauli { pauli, bit, .. } => {
                Self { bit: Some(*bit), pauli: Some(*pauli), ..Self::plain("cpauli", qubits) }
            }
        }
    }
}

impl TryFrom<GateJson> for Gate {
    type Error = Error;

    fn try_from(g: GateJson) -> Result<Gate> {
        let arity = |n: usize| -> Result<()> {
            if g.qubits.len() != n {
                return Err(Error::Parse(format!("gate '{}' expects {n} qubits, got {}", g.kind, g.qubits.len())));
            }
            Ok(())
        };
        let angle = || g.angle.ok_or_else(|| Error::Parse(format!("gate '{}' needs an angle", g.kind)));
        let bit = || g.bit.ok_or_else(|| Error::Parse(format!("gate '{}' needs a classical bit", g.kind)));
        let q = &g.qubits;
        Ok(match g.kind.as_str() {
            "h" | "s" | "sdg" | "x" | "z" => {
                arity(1)?;
                match g.kind.as_str() {
                    "h" => Gate::H(q[0]),
                    "s" => Gate::S(q[0]),
                    "sdg" => Gate::Sdg(q[0]),
                    "x" => Gate::X(q[0]),
                    _ => Gate::Z(q[0]),
                }
            }
            "rz" => {
                arity(1)?;
                Gate::Rz { qubit: q[0], angle: angle()? }
            }
            "rzz" => {
                arity(2)?;
                Gate::Rzz { qubits: [q[0], q[1]], angle: angle()? }
            }
            "mrz" => {
                if q.is_empty() {
                    return Err(Error::Parse("gate 'mrz' needs at least one qubit".into()));
                }
                Gate::MultiRz { qubits: q.clone(), angle: angle()? }
            }
            "cnot" => {
                arity(2)?;
                Gate::Cnot { control: q[0], target: q[1] }
            }
            "measure" => {
                arity(1)?;
                Gate::MeasureZ { qubit: q[0], bit: bit()? }
            }
            "cpauli" => {
                arity(1)?;
                let pauli = g.pauli.ok_or_else(|| Error::Parse("gate 'cpauli' needs a pauli".into()))?;
                Gate::ConditionedPauli { pauli, qubit: q[0], bit: bit()? }
            }
            "prep" => {
                let amps = g.amplitudes.as_ref().ok_or_else(|| Error::Parse("gate 'prep' needs amplitudes".into()))?;
                Gate::PrepareState {
                    register: q.clone(),
                    amplitudes: amps.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
                }
            }
            other => return Err(Error::Parse(format!("unknown gate kind '{other}'"))),
        })
    }
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            num_qubits: c.num_qubits,
            partition: c.partition.clone(),
            gates: c.gates.iter().map(GateJson::from).collect(),
            num_classical_bits: (c.num_classical_bits > 0).then_some(c.num_classical_bits),
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(raw: CircuitJson) -> Result<Circuit> {
        let mut c = Circuit::new(raw.num_qubits, raw.partition);
        for g in raw.gates {
            c.push(g.try_into()?);
        }
        if let Some(n) = raw.num_classical_bits {
            c.num_classical_bits = c.num_classical_bits.max(n);
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_format() {
        let text = r#"{"num_qubits": 4, "partition": ["A","A","B","B"],
            "gates": [{"kind": "h", "qubits": [0]},
                      {"kind": "rzz", "qubits": [0,3], "angle": 1.5707963267948966},
                      {"kind": "mrz", "qubits": [0,1,2], "angle": 0.5},
                      {"kind": "measure", "qubits": [1], "bit": 0}]}"#;
        let c = Circuit::from_json(text).unwrap();
        assert_eq!(c.gates.len(), 4);
        assert_eq!(c.num_classical_bits, 1);
        assert_eq!(c.cross_partition_gates(), vec![1, 2]);
        assert_eq!(c.gates[1], Gate::Rzz { qubits: [0, 3], angle: std::f64::consts::FRAC_PI_2 });
    }

    #[test]
    fn rejects_bad_circuits() {
        assert!(Circuit::from_json(
            r#"{"num_qubits": 1, "partition": ["A"], "gates": [{"kind": "cnot", "qubits": [0, 0]}]}"#
        )
        .is_err());
        assert!(Circuit::from_json(
            r#"{"num_qubits": 1, "partition": ["A"], "gates": [{"kind": "h", "qubits": [3]}]}"#
        )
        .is_err());
        assert!(Circuit::from_json(
            r#"{"num_qubits": 1, "partition": ["A"], "gates": [{"kind": "foo", "qubits": [0]}]}"#
        )
        .is_err());
        assert!(Circuit::from_json(r#"{"num_qubits": 1, "partition": ["A"], "gates": [{"kind": "prep", "qubits": [0], "amplitudes": [[1,0],[1,0]]}]}"#).is_err());
    }

    #[test]
    fn conditioned_gate_needs_earlier_measurement() {
        let mut c = Circuit::unpartitioned(2);
        c.num_classical_bits = 1;
        c.push(Gate::ConditionedPauli { pauli: Pauli::X, qubit: 1, bit: 0 });
        c.push(Gate::MeasureZ { qubit: 0, bit: 0 });
        assert!(c.validate().is_err());
    }

    #[test]
    fn classical_bits_are_write_once() {
        let mut c = Circuit::unpartitioned(2);
        c.push(Gate::MeasureZ { qubit: 0, bit: 0 });
        c.push(Gate::MeasureZ { qubit: 1, bit: 0 });
        assert!(c.validate().is_err());
    }

    #[test]
    fn communication_free_validator() {
        let mut c = Circuit::new(2, vec![Partition::A, Partition::B]);
        c.push(Gate::MeasureZ { qubit: 0, bit: 0 });
        c.push(Gate::ConditionedPauli { pauli: Pauli::Z, qubit: 0, bit: 0 });
        assert!(c.is_communication_free());
        c.push(Gate::ConditionedPauli { pauli: Pauli::X, qubit: 1, bit: 0 });
        assert!(!c.is_communication_free());
    }
}
