use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::teleport::{virtual_block_a, virtual_block_b};
use crate::circuit::{build_multi_rz_ladder, build_parity_instrument, Gate, Partition};
use crate::error::{Error, Result};
use crate::qpd::{pure_state_qpd_from_expansion, TermLabel};
use crate::tensor::{C64, SCHMIDT_PRUNE_TOL};

use super::gamma::{gamma_independent, gamma_joint};

/// Terms with smaller `|weight|` are dropped.
pub const WEIGHT_DROP_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Independent,
    #[serde(rename = "joint")]
    JointTeleport,
    #[serde(rename = "parallel")]
    ParallelAncillaFree,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Independent => "independent",
            Scheme::JointTeleport => "joint",
            Scheme::ParallelAncillaFree => "parallel",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(Scheme::Independent),
            "joint" => Ok(Scheme::JointTeleport),
            "parallel" => Ok(Scheme::ParallelAncillaFree),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Qubit numbering shared by every decomposition of `n` cut gates.
///
/// Gate `s` acts on `a(s) = s` and `b(s) = n + s`. Schemes with ancillas add
/// `a'(s) = 2n + s` on side A and `b'(s) = 3n + s` on side B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub gates: usize,
    pub ancillas: bool,
}

impl Layout {
    pub fn data_a(&self, s: usize) -> usize {
        s
    }
    pub fn data_b(&self, s: usize) -> usize {
        self.gates + s
    }
    pub fn ancilla_a(&self, s: usize) -> usize {
        2 * self.gates + s
    }
    pub fn ancilla_b(&self, s: usize) -> usize {
        3 * self.gates + s
    }
    pub fn num_data(&self) -> usize {
        2 * self.gates
    }
    pub fn num_qubits(&self) -> usize {
        if self.ancillas {
            4 * self.gates
        } else {
            2 * self.gates
        }
    }
    pub fn partition_of(&self, q: usize) -> Partition {
        let n = self.gates;
        if q < n || (2 * n..3 * n).contains(&q) {
            Partition::A
        } else {
            Partition::B
        }
    }
    pub fn partition(&self) -> Vec<Partition> {
        (0..self.num_qubits()).map(|q| self.partition_of(q)).collect()
    }
    /// Side-B ancilla register in ket order `|j_n … j_1⟩`.
    pub fn ancilla_register_b(&self) -> Vec<usize> {
        (0..self.gates).rev().map(|s| self.ancilla_b(s)).collect()
    }
    pub fn ancilla_register_a(&self) -> Vec<usize> {
        (0..self.gates).map(|s| self.ancilla_a(s)).collect()
    }
}

/// One sampled channel `F_i^A ⊗ F_i^B` in layout numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct ExecutableTerm {
    pub weight: f64,
    /// Runs before anything else (ancilla initialization).
    pub prepare: Vec<Gate>,
    /// `slots[s]` takes the place of cut gate `s`.
    pub slots: Vec<Vec<Gate>>,
    /// Classical bits whose parity multiplies the sign of the shot.
    pub sign_bits: Vec<usize>,
    pub label: String,
}

impl ExecutableTerm {
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.prepare.iter().chain(self.slots.iter().flatten())
    }

    fn ops_on(&self, layout: &Layout, p: Partition) -> Vec<Gate> {
        self.gates().filter(|g| g.qubits().iter().all(|&q| layout.partition_of(q) == p)).cloned().collect()
    }

    pub fn ops_a(&self, layout: &Layout) -> Vec<Gate> {
        self.ops_on(layout, Partition::A)
    }

    pub fn ops_b(&self, layout: &Layout) -> Vec<Gate> {
        self.ops_on(layout, Partition::B)
    }

    pub fn num_classical_bits(&self) -> usize {
        self.gates().filter_map(|g| g.classical_bit()).map(|b| b + 1).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct CutDecomposition {
    pub terms: Vec<ExecutableTerm>,
    pub gamma: f64,
    pub scheme: Scheme,
    pub thetas: Vec<f64>,
    pub layout: Layout,
}

impl CutDecomposition {
    pub fn kappa(&self) -> f64 {
        self.terms.iter().map(|t| t.weight.abs()).sum()
    }

    pub fn ancillas_per_partition(&self) -> usize {
        if self.layout.ancillas {
            self.layout.gates
        } else {
            0
        }
    }

    pub fn num_classical_bits(&self) -> usize {
        self.terms.iter().map(|t| t.num_classical_bits()).max().unwrap_or(0)
    }

    /// Number of channel products in the expansion, counting each
    /// `(R(π/2) − R(−π/2))/2` pair once rather than as two unitaries.
    pub fn channel_term_count(&self) -> usize {
        let merged: std::collections::BTreeSet<String> =
            self.terms.iter().map(|t| t.label.replace("R+", "R").replace("R-", "R")).collect();
        merged.len()
    }

    fn finish(mut self) -> Self {
        self.terms.retain(|t| t.weight.abs() >= WEIGHT_DROP_TOL);
        self
    }
}

fn coefficient(thetas: &[f64], j: usize) -> f64 {
    thetas.iter().enumerate().map(|(s, t)| if (j >> s) & 1 == 1 { (t / 2.0).sin() } else { (t / 2.0).cos() }).product()
}

fn z_string(qubits: impl Iterator<Item = usize>) -> Vec<Gate> {
    qubits.map(Gate::Z).collect()
}

fn selected(mask: usize, n: usize, q: impl Fn(usize) -> usize) -> Vec<usize> {
    (0..n).filter(|s| (mask >> s) & 1 == 1).map(q).collect()
}

fn bits(mask: usize) -> String {
    format!("{mask:b}")
}

/// Local factor of a cross term: the `±π/2` rotation pair or the parity
/// instrument.
#[derive(Clone, Copy)]
enum Factor {
    Rotation,
    Parity,
}

fn expand_factor(f: Factor, qubits: &[usize], bit: usize) -> Vec<(f64, Vec<Gate>, Option<usize>, &'static str)> {
    match f {
        Factor::Rotation => vec![
            (0.5, build_multi_rz_ladder(FRAC_PI_2, qubits).expect("nonempty"), None, "R+"),
            (-0.5, build_multi_rz_ladder(-FRAC_PI_2, qubits).expect("nonempty"), None, "R-"),
        ],
        Factor::Parity => vec![(1.0, build_parity_instrument(qubits, bit).expect("nonempty"), Some(bit), "P")],
    }
}

/// Ancilla-free decomposition of `n` parallel gates `R_zz(θ_s)` on
/// `(a(s), b(s))`. Every term is diagonal: `Z` strings, `±π/2` multi-qubit
/// rotations and parity instruments, all compiled to CNOT ladders. Bit 0 is
/// the A-side instrument, bit 1 the B-side one.
pub fn cut_parallel_ancilla_free(thetas: &[f64]) -> Result<CutDecomposition> {
    let n = thetas.len();
    if n == 0 {
        return Err(Error::NothingToCut("no gates".into()));
    }
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite angle".into()));
    }
    let layout = Layout { gates: n, ancillas: false };
    let m = 1usize << n;
    let c: Vec<f64> = (0..m).map(|j| coefficient(thetas, j)).collect();
    let live: Vec<usize> = (0..m).filter(|&j| c[j].abs() > SCHMIDT_PRUNE_TOL).collect();
    let slot_term = |weight: f64, ops: Vec<Gate>, sign_bits: Vec<usize>, label: String| {
        let mut slots = vec![Vec::new(); n];
        slots[0] = ops;
        ExecutableTerm { weight, prepare: Vec::new(), slots, sign_bits, label }
    };
    let mut terms = Vec::new();
    for &j in &live {
        let mut ops = z_string(selected(j, n, |s| layout.data_a(s)).into_iter());
        ops.extend(z_string(selected(j, n, |s| layout.data_b(s)).into_iter()));
        terms.push(slot_term(c[j] * c[j], ops, vec![], format!("Z{}", bits(j))));
    }
    for (x, &i) in live.iter().enumerate() {
        for &j in &live[..x] {
            let support = i ^ j;
            assert_ne!(support, 0, "cross term with identical indices");
            let qa = selected(support, n, |s| layout.data_a(s));
            let qb = selected(support, n, |s| layout.data_b(s));
            let nu = j.count_ones() as i64 - i.count_ones() as i64;
            let base = 2.0 * c[i] * c[j];
            // (sign, A factor, B factor) of each product in the bracket
            let products: Vec<(f64, Factor, Factor)> = match nu.rem_euclid(4) {
                0 => vec![(1.0, Factor::Parity, Factor::Parity), (-1.0, Factor::Rotation, Factor::Rotation)],
                2 => vec![(-1.0, Factor::Parity, Factor::Parity), (1.0, Factor::Rotation, Factor::Rotation)],
                1 => vec![(1.0, Factor::Rotation, Factor::Parity), (1.0, Factor::Parity, Factor::Rotation)],
                _ => vec![(-1.0, Factor::Rotation, Factor::Parity), (-1.0, Factor::Parity, Factor::Rotation)],
            };
            let prefix_a = z_string(selected(i, n, |s| layout.data_a(s)).into_iter());
            let prefix_b = z_string(selected(i, n, |s| layout.data_b(s)).into_iter());
            for (sign, fa, fb) in products {
                for (wa, ops_a, bit_a, la) in expand_factor(fa, &qa, 0) {
                    for (wb, ops_b, bit_b, lb) in expand_factor(fb, &qb, 1) {
                        let mut ops = ops_a.clone();
                        ops.extend(ops_b);
                        ops.extend(prefix_a.iter().cloned());
                        ops.extend(prefix_b.iter().cloned());
                        let sign_bits = bit_a.into_iter().chain(bit_b).collect();
                        let label = format!("Z{}[{la}x{lb}]{}", bits(i), bits(j));
                        terms.push(slot_term(base * sign * wa * wb, ops, sign_bits, label));
                    }
                }
            }
        }
    }
    Ok(CutDecomposition {
        terms,
        gamma: gamma_joint(thetas),
        scheme: Scheme::ParallelAncillaFree,
        thetas: thetas.to_vec(),
        layout,
    }
    .finish())
}

/// Joint virtual teleportation of `n` gates: one ancilla per side and gate,
/// the resource `Σ_j c_j |j_1…j_n⟩|j_n…j_1⟩` replaced by its quasi-probability
/// decomposition. Gate `s` records `k_s` in bit `s` and `l_s` in bit `n + s`.
pub fn cut_joint_teleport(thetas: &[f64], alpha: usize) -> Result<CutDecomposition> {
    let n = thetas.len();
    if n == 0 {
        return Err(Error::NothingToCut("no gates".into()));
    }
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite angle".into()));
    }
    let layout = Layout { gates: n, ancillas: true };
    let m = 1usize << n;
    let coefficients: Vec<f64> = (0..m).map(|j| coefficient(thetas, j)).collect();
    let ket = |index: usize| {
        let mut v = vec![C64::new(0.0, 0.0); m];
        v[index] = C64::new(1.0, 0.0);
        v
    };
    // register positions hold j_1 … j_n on A and j_n … j_1 on B
    let reverse = |j: usize| (0..n).fold(0, |acc, s| (acc << 1) | ((j >> s) & 1));
    let left: Vec<_> = (0..m).map(|j| ket(reverse(j))).collect();
    let right: Vec<_> = (0..m).map(ket).collect();
    let qpd = pure_state_qpd_from_expansion(&coefficients, &left, &right, alpha)?;

    let slots: Vec<Vec<Gate>> = (0..n)
        .map(|s| {
            let mut ops = virtual_block_a(layout.data_a(s), layout.ancilla_a(s), s);
            ops.extend(virtual_block_b(layout.data_b(s), layout.ancilla_b(s), n + s));
            ops
        })
        .collect();
    let terms = qpd
        .terms
        .iter()
        .map(|t| {
            let (sign_bits, label) = match t.label {
                TermLabel::Diagonal { j } => (vec![], format!("D{}", bits(j))),
                TermLabel::Cross { i, j, r, plus } => {
                    let sb = (0..n).filter(|s| ((i ^ j) >> s) & 1 == 1).flat_map(|s| [s, n + s]).collect();
                    (sb, format!("C{}.{}.{r}{}", bits(i), bits(j), if plus { '+' } else { '-' }))
                }
            };
            ExecutableTerm {
                weight: t.coefficient,
                prepare: vec![
                    Gate::PrepareState {
                        register: layout.ancilla_register_a(),
                        amplitudes: t.state_a.amplitudes().to_vec(),
                    },
                    Gate::PrepareState {
                        register: layout.ancilla_register_b(),
                        amplitudes: t.state_b.amplitudes().to_vec(),
                    },
                ],
                slots: slots.clone(),
                sign_bits,
                label,
            }
        })
        .collect();
    Ok(CutDecomposition {
        terms,
        gamma: gamma_joint(thetas),
        scheme: Scheme::JointTeleport,
        thetas: thetas.to_vec(),
        layout,
    }
    .finish())
}

/// Each gate cut on its own with the single-gate ancilla-free decomposition;
/// the product over gates. Gate `s` uses bits `2s` and `2s + 1`.
pub fn cut_independent(thetas: &[f64]) -> Result<CutDecomposition> {
    let n = thetas.len();
    if n == 0 {
        return Err(Error::NothingToCut("no gates".into()));
    }
    let layout = Layout { gates: n, ancillas: false };
    let mut terms = vec![ExecutableTerm {
        weight: 1.0,
        prepare: vec![],
        slots: vec![Vec::new(); n],
        sign_bits: vec![],
        label: String::new(),
    }];
    for (s, &theta) in thetas.iter().enumerate() {
        let single = cut_parallel_ancilla_free(&[theta])?;
        let remap = |g: &Gate| {
            g.map_qubits(|q| if q == 0 { layout.data_a(s) } else { layout.data_b(s) }).map_bits(|b| 2 * s + b)
        };
        let mut next = Vec::with_capacity(terms.len() * single.terms.len());
        for t in &terms {
            for u in &single.terms {
                let mut slots = t.slots.clone();
                slots[s] = u.slots[0].iter().map(remap).collect();
                let mut sign_bits = t.sign_bits.clone();
                sign_bits.extend(u.sign_bits.iter().map(|b| 2 * s + b));
                let label = if t.label.is_empty() { u.label.clone() } else { format!("{}|{}", t.label, u.label) };
                next.push(ExecutableTerm { weight: t.weight * u.weight, prepare: vec![], slots, sign_bits, label });
            }
        }
        terms = next;
    }
    Ok(CutDecomposition {
        terms,
        gamma: gamma_independent(thetas),
        scheme: Scheme::Independent,
        thetas: thetas.to_vec(),
        layout,
    }
    .finish())
}

pub fn decompose(scheme: Scheme, thetas: &[f64], alpha: usize) -> Result<CutDecomposition> {
    match scheme {
        Scheme::Independent => cut_independent(thetas),
        Scheme::JointTeleport => cut_joint_teleport(thetas, alpha),
        Scheme::ParallelAncillaFree => cut_parallel_ancilla_free(thetas),
    }
}
