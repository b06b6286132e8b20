use serde::{Deserialize, Serialize};

use crate::tensor::{gates, ComplexMatrix, C64, STATE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

/// One circuit instruction. Angles are in radians.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    /// `exp(-i angle Z / 2)`
    Rz {
        qubit: usize,
        angle: f64,
    },
    /// `cos(θ/2) I⊗I − i sin(θ/2) Z⊗Z`
    Rzz {
        qubits: [usize; 2],
        angle: f64,
    },
    /// `exp(-i angle/2 Z⊗…⊗Z)`
    MultiRz {
        qubits: Vec<usize>,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Initializes a fresh register (all qubits still `|0⟩`) to the given amplitudes.
    PrepareState {
        register: Vec<usize>,
        amplitudes: Vec<C64>,
    },
    MeasureZ {
        qubit: usize,
        bit: usize,
    },
    ConditionedPauli {
        pauli: Pauli,
        qubit: usize,
        bit: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Rz { qubit, .. } | Gate::MeasureZ { qubit, .. } | Gate::ConditionedPauli { qubit, .. } => {
                vec![*qubit]
            }
            Gate::Rzz { qubits, .. } => qubits.to_vec(),
            Gate::MultiRz { qubits, .. } => qubits.clone(),
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::PrepareState { register, .. } => register.clone(),
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::PrepareState { .. } | Gate::MeasureZ { .. } | Gate::ConditionedPauli { .. })
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasureZ { .. })
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Matrix of a unitary gate on its own qubits (in `qubits()` order).
    pub fn matrix(&self) -> Option<ComplexMatrix> {
        Some(match self {
            Gate::H(_) => gates::h(),
            Gate::S(_) => gates::s(),
            Gate::Sdg(_) => gates::sdg(),
            Gate::X(_) => gates::x(),
            Gate::Z(_) => gates::z(),
            Gate::Rz { angle, .. } => gates::rz(*angle),
            Gate::Rzz { angle, .. } => gates::rzz(*angle),
            Gate::MultiRz { qubits, angle } => gates::multi_rz(*angle, qubits.len()),
            Gate::Cnot { .. } => gates::cnot(),
            _ => return None,
        })
    }

    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Rz { qubit, angle } => Gate::Rz { qubit: f(*qubit), angle: *angle },
            Gate::Rzz { qubits, angle } => Gate::Rzz { qubits: [f(qubits[0]), f(qubits[1])], angle: *angle },
            Gate::MultiRz { qubits, angle } => {
                Gate::MultiRz { qubits: qubits.iter().map(|&q| f(q)).collect(), angle: *angle }
            }
            Gate::Cnot { control, target } => Gate::Cnot { control: f(*control), target: f(*target) },
            Gate::PrepareState { register, amplitudes } => Gate::PrepareState {
                register: register.iter().map(|&q| f(q)).collect(),
                amplitudes: amplitudes.clone(),
            },
            Gate::MeasureZ { qubit, bit } => Gate::MeasureZ { qubit: f(*qubit), bit: *bit },
            Gate::ConditionedPauli { pauli, qubit, bit } => {
                Gate::ConditionedPauli { pauli: *pauli, qubit: f(*qubit), bit: *bit }
            }
        }
    }

    pub fn map_bits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::MeasureZ { qubit, bit } => Gate::MeasureZ { qubit: *qubit, bit: f(*bit) },
            Gate::ConditionedPauli { pauli, qubit, bit } => {
                Gate::ConditionedPauli { pauli: *pauli, qubit: *qubit, bit: f(*bit) }
            }
            other => other.clone(),
        }
    }

    pub fn classical_bit(&self) -> Option<usize> {
        match self {
            Gate::MeasureZ { bit, .. } | Gate::ConditionedPauli { bit, .. } => Some(*bit),
            _ => None,
        }
    }

    pub(crate) fn prep_is_normalized(&self) -> bool {
        match self {
            Gate::PrepareState { amplitudes, .. } => {
                let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (norm - 1.0).abs() <= STATE_TOL
            }
            _ => true,
        }
    }
}

/// Dense unitary of a measurement-free gate list on `num_qubits` qubits.
pub fn gates_unitary(num_qubits: usize, gate_list: &[Gate]) -> Option<ComplexMatrix> {
    let dim = 1usize << num_qubits;
    let mut u = ComplexMatrix::identity(dim);
    for g in gate_list {
        let embedded = embed(num_qubits, &g.qubits(), &g.matrix()?);
        u = embedded.matmul(&u).expect("square");
    }
    Some(u)
}

/// Embed a `k`-qubit operator acting on `targets` into the full space.
pub fn embed(num_qubits: usize, targets: &[usize], op: &ComplexMatrix) -> ComplexMatrix {
    let dim = 1usize << num_qubits;
    let rest: Vec<usize> = (0..num_qubits).filter(|q| !targets.contains(q)).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    let sub = |idx: usize, qs: &[usize]| -> usize {
        qs.iter().fold(0usize, |acc, &q| (acc << 1) | ((idx >> (num_qubits - 1 - q)) & 1))
    };
    for row in 0..dim {
        for col in 0..dim {
            if sub(row, &rest) != sub(col, &rest) {
                continue;
            }
            out[(row, col)] = op[(sub(row, targets), sub(col, targets))];
        }
    }
    out
}
