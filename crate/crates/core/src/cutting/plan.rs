//! Binding a decomposition to a circuit and splitting every term into two
//! independent fragments.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate, Partition};
use crate::error::{Error, Result};

use super::decomposition::{decompose, CutDecomposition, ExecutableTerm, Scheme};

/// `MultiRz` spanning both partitions as CNOT ladders inside each partition
/// around one cross-partition `R_zz`. Returns `(ladder before, R_zz, ladder
/// after)`.
pub fn reduce_multiqubit_rotation(gate: &Gate, partition: &[Partition]) -> Result<(Vec<Gate>, Gate, Vec<Gate>)> {
    let (qubits, angle) = match gate {
        Gate::MultiRz { qubits, angle } => (qubits.clone(), *angle),
        Gate::Rzz { qubits, angle } => (qubits.to_vec(), *angle),
        other => return Err(Error::InvalidArgument(format!("not a Z rotation: {other:?}"))),
    };
    let qa: Vec<usize> = qubits.iter().copied().filter(|&q| partition[q] == Partition::A).collect();
    let qb: Vec<usize> = qubits.iter().copied().filter(|&q| partition[q] == Partition::B).collect();
    if qa.is_empty() || qb.is_empty() {
        return Err(Error::NothingToCut("rotation lies inside one partition".into()));
    }
    let ladder =
        |qs: &[usize]| -> Vec<Gate> { qs.windows(2).map(|w| Gate::Cnot { control: w[0], target: w[1] }).collect() };
    let mut before = ladder(&qa);
    before.extend(ladder(&qb));
    let after: Vec<Gate> = before.iter().rev().cloned().collect();
    let core = Gate::Rzz { qubits: [*qa.last().unwrap(), *qb.last().unwrap()], angle };
    Ok((before, core, after))
}

/// Local gates before, the `R_zz` core and local gates after a cut gate.
type Rewritten = (Vec<Gate>, Gate, Vec<Gate>);

fn rewrite_cross(g: &Gate, partition: &[Partition]) -> Result<Rewritten> {
    match g {
        Gate::Cnot { control, target } => {
            let (c0, t0) = (*control, *target);
            let pair = if partition[c0] == Partition::A { [c0, t0] } else { [t0, c0] };
            Ok((
                vec![Gate::H(t0)],
                Gate::Rzz { qubits: pair, angle: FRAC_PI_2 },
                vec![Gate::Sdg(c0), Gate::Sdg(t0), Gate::H(t0)],
            ))
        }
        Gate::Rzz { .. } | Gate::MultiRz { .. } => reduce_multiqubit_rotation(g, partition),
        other => Err(Error::MalformedCircuit(format!("cannot cut {other:?} across the partition"))),
    }
}

/// Rewrites every cross-partition gate as local gates around a single
/// `R_zz`. A run of consecutive cross-partition gates on distinct qubits
/// keeps its cores in one time slice.
pub fn normalize(c: &Circuit) -> Result<Circuit> {
    c.validate()?;
    if c.has_measurements() {
        return Err(Error::MeasurementPresent);
    }
    let crosses = |g: &Gate| {
        let qs = g.qubits();
        qs.iter().any(|&q| c.partition[q] == Partition::A) && qs.iter().any(|&q| c.partition[q] == Partition::B)
    };
    let mut out = Circuit::new(c.num_qubits, c.partition.clone());
    let mut i = 0;
    while i < c.gates.len() {
        if !crosses(&c.gates[i]) {
            out.push(c.gates[i].clone());
            i += 1;
            continue;
        }
        let mut used: Vec<usize> = Vec::new();
        let mut run = Vec::new();
        while i < c.gates.len() && crosses(&c.gates[i]) {
            let qs = c.gates[i].qubits();
            if qs.iter().any(|q| used.contains(q)) {
                break;
            }
            used.extend(qs);
            run.push(rewrite_cross(&c.gates[i], &c.partition)?);
            i += 1;
        }
        out.extend(run.iter().flat_map(|r| r.0.iter().cloned()));
        out.extend(run.iter().map(|r| r.1.clone()));
        out.extend(run.iter().flat_map(|r| r.2.iter().cloned()));
    }
    Ok(out)
}

/// The cross-partition `R_zz` gates of a normalized circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct GateGroup {
    pub gate_indices: Vec<usize>,
    /// `(A qubit, B qubit)` of each gate.
    pub pairs: Vec<(usize, usize)>,
    pub thetas: Vec<f64>,
    /// All gates on distinct qubits with nothing in between touching them.
    pub parallel: bool,
}

impl GateGroup {
    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let mut gate_indices = Vec::new();
        let mut pairs = Vec::new();
        let mut thetas = Vec::new();
        for idx in c.cross_partition_gates() {
            match &c.gates[idx] {
                Gate::Rzz { qubits, angle } if c.partition[qubits[0]] == Partition::A => {
                    gate_indices.push(idx);
                    pairs.push((qubits[0], qubits[1]));
                    thetas.push(*angle);
                }
                Gate::Rzz { qubits, angle } => {
                    gate_indices.push(idx);
                    pairs.push((qubits[1], qubits[0]));
                    thetas.push(*angle);
                }
                other => return Err(Error::InvalidGroup(format!("gate {idx} ({other:?}) is not normalized"))),
            }
        }
        if gate_indices.is_empty() {
            return Err(Error::NothingToCut("no gate crosses the partition".into()));
        }
        let parallel = Self::check_parallel(c, &gate_indices, &pairs);
        Ok(Self { gate_indices, pairs, thetas, parallel })
    }

    fn check_parallel(c: &Circuit, idx: &[usize], pairs: &[(usize, usize)]) -> bool {
        let used: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut sorted = used.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != used.len() {
            return false;
        }
        let (first, last) = (idx[0], *idx.last().unwrap());
        (first..=last).filter(|i| !idx.contains(i)).all(|i| c.gates[i].qubits().iter().all(|q| !used.contains(q)))
    }
}

/// One side of a term, renumbered to its own qubits and bits.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub circuit: Circuit,
    /// Circuit qubit (or `None` for an ancilla) of each fragment qubit.
    pub data_qubits: Vec<Option<usize>>,
    /// Bound classical bit of each fragment bit.
    pub bits: Vec<usize>,
}

/// A decomposition attached to a concrete circuit.
#[derive(Clone, Debug)]
pub struct CutPlan {
    /// The input with cross-partition gates normalized.
    pub circuit: Circuit,
    pub group: GateGroup,
    pub decomposition: CutDecomposition,
}

impl CutPlan {
    pub fn new(circuit: &Circuit, scheme: Scheme, alpha: usize) -> Result<Self> {
        let circuit = normalize(circuit)?;
        let group = GateGroup::from_circuit(&circuit)?;
        if scheme == Scheme::ParallelAncillaFree && !group.parallel {
            return Err(Error::InvalidGroup("cut gates are not in one time slice".into()));
        }
        let decomposition = decompose(scheme, &group.thetas, alpha)?;
        Ok(Self { circuit, group, decomposition })
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits + 2 * self.decomposition.ancillas_per_partition()
    }

    fn map_qubit(&self, q: usize) -> usize {
        let n = self.group.pairs.len();
        let base = self.circuit.num_qubits;
        match q / n {
            0 => self.group.pairs[q].0,
            1 => self.group.pairs[q - n].1,
            2 => base + (q - 2 * n),
            _ => base + n + (q - 3 * n),
        }
    }

    pub fn partition(&self) -> Vec<Partition> {
        let n = self.decomposition.ancillas_per_partition();
        let mut p = self.circuit.partition.clone();
        p.extend(std::iter::repeat_n(Partition::A, n));
        p.extend(std::iter::repeat_n(Partition::B, n));
        p
    }

    /// Full circuit with the cut gates replaced by the term's operations.
    pub fn bind(&self, t: &ExecutableTerm) -> Circuit {
        let mut c = Circuit::new(self.num_qubits(), self.partition());
        let map = |g: &Gate| g.map_qubits(|q| self.map_qubit(q));
        c.extend(t.prepare.iter().map(map));
        for (i, g) in self.circuit.gates.iter().enumerate() {
            match self.group.gate_indices.iter().position(|&x| x == i) {
                Some(s) => {
                    c.extend(t.slots[s].iter().map(map));
                }
                None => {
                    c.push(g.clone());
                }
            }
        }
        c.num_classical_bits = c.num_classical_bits.max(self.decomposition.num_classical_bits());
        c.sign_bits = t.sign_bits.clone();
        c
    }

    /// Splits a bound term into independent A and B fragments.
    pub fn fragments(&self, t: &ExecutableTerm) -> Result<(Fragment, Fragment)> {
        let full = self.bind(t);
        full.validate()?;
        if !full.cross_partition_gates().is_empty() {
            return Err(Error::MalformedCircuit("bound term still couples the partitions".into()));
        }
        full.check_communication_free()?;
        let split = |p: Partition| -> Fragment {
            let qubits = full.qubits_in(p);
            let mut local = vec![usize::MAX; full.num_qubits];
            for (i, &q) in qubits.iter().enumerate() {
                local[q] = i;
            }
            let gates: Vec<&Gate> = full.gates.iter().filter(|g| full.partition[g.qubits()[0]] == p).collect();
            let mut bits: Vec<usize> = gates.iter().filter_map(|g| g.classical_bit()).collect();
            bits.sort_unstable();
            bits.dedup();
            let mut c = Circuit::new(qubits.len(), vec![p; qubits.len()]);
            for g in gates {
                c.push(g.map_qubits(|q| local[q]).map_bits(|b| bits.iter().position(|&x| x == b).unwrap()));
            }
            c.num_classical_bits = bits.len();
            let data_qubits = qubits.iter().map(|&q| (q < self.circuit.num_qubits).then_some(q)).collect();
            Fragment { circuit: c, data_qubits, bits }
        };
        Ok((split(Partition::A), split(Partition::B)))
    }
}
