//! Statevector execution with eager mid-circuit measurement.
//!
//! Amplitude index bit `n-1-q` holds qubit `q`. Measured bitstrings handed
//! to post-processing functions use the opposite, qubit-indexed layout:
//! bit `q` of the `u64` mask is the outcome of qubit `q`.

use rand::Rng;

use super::circuit::Circuit;
use super::gate::{Gate, Pauli};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::tensor::{Statevector, C64, I, ONE, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub bits: Vec<Option<u8>>,
    /// `(-1)^(parity of the circuit's sign bits)`.
    pub sign_factor: i8,
}

impl ShotRecord {
    pub fn bit(&self, b: usize) -> Option<u8> {
        self.bits.get(b).copied().flatten()
    }
}

#[inline]
fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

fn apply_1q(amps: &mut [C64], n: usize, q: usize, m: [[C64; 2]; 2]) {
    let mask = qubit_mask(n, q);
    for idx in 0..amps.len() {
        if idx & mask != 0 {
            continue;
        }
        let a0 = amps[idx];
        let a1 = amps[idx | mask];
        amps[idx] = m[0][0] * a0 + m[0][1] * a1;
        amps[idx | mask] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Multiply by `even` / `odd` depending on the parity of the masked bits.
fn apply_parity_phase(amps: &mut [C64], mask: usize, even: C64, odd: C64) {
    for (idx, a) in amps.iter_mut().enumerate() {
        *a *= if (idx & mask).count_ones().is_multiple_of(2) { even } else { odd };
    }
}

fn apply_cnot(amps: &mut [C64], n: usize, control: usize, target: usize) {
    let cm = qubit_mask(n, control);
    let tm = qubit_mask(n, target);
    for idx in 0..amps.len() {
        if idx & cm != 0 && idx & tm == 0 {
            amps.swap(idx, idx | tm);
        }
    }
}

/// Maps the `|0…0⟩` component of `register` to `|amplitudes⟩`.
fn apply_prepare(amps: &mut [C64], n: usize, register: &[usize], state: &[C64]) {
    let reg_mask: usize = register.iter().map(|&q| qubit_mask(n, q)).sum();
    let offsets: Vec<usize> = (0..state.len())
        .map(|k| {
            register
                .iter()
                .enumerate()
                .filter(|(j, _)| (k >> (register.len() - 1 - j)) & 1 == 1)
                .map(|(_, &q)| qubit_mask(n, q))
                .sum()
        })
        .collect();
    for base in 0..amps.len() {
        if base & reg_mask != 0 {
            continue;
        }
        let v = amps[base];
        for (k, &off) in offsets.iter().enumerate() {
            amps[base | off] = v * state[k];
        }
    }
}

/// Applies a unitary gate, or the linear part of a preparation.
pub(crate) fn apply_linear(amps: &mut [C64], n: usize, gate: &Gate) {
    let frac = std::f64::consts::FRAC_1_SQRT_2;
    let h = C64::new(frac, 0.0);
    match gate {
        Gate::H(q) => apply_1q(amps, n, *q, [[h, h], [h, -h]]),
        Gate::X(q) => apply_1q(amps, n, *q, [[ZERO, ONE], [ONE, ZERO]]),
        Gate::Z(q) => apply_parity_phase(amps, qubit_mask(n, *q), ONE, -ONE),
        Gate::S(q) => apply_parity_phase(amps, qubit_mask(n, *q), ONE, I),
        Gate::Sdg(q) => apply_parity_phase(amps, qubit_mask(n, *q), ONE, -I),
        Gate::Rz { qubit, angle } => apply_parity_phase(
            amps,
            qubit_mask(n, *qubit),
            C64::from_polar(1.0, -angle / 2.0),
            C64::from_polar(1.0, angle / 2.0),
        ),
        Gate::Rzz { qubits, angle } => apply_parity_phase(
            amps,
            qubit_mask(n, qubits[0]) | qubit_mask(n, qubits[1]),
            C64::from_polar(1.0, -angle / 2.0),
            C64::from_polar(1.0, angle / 2.0),
        ),
        Gate::MultiRz { qubits, angle } => apply_parity_phase(
            amps,
            qubits.iter().map(|&q| qubit_mask(n, q)).fold(0, |a, b| a | b),
            C64::from_polar(1.0, -angle / 2.0),
            C64::from_polar(1.0, angle / 2.0),
        ),
        Gate::Cnot { control, target } => apply_cnot(amps, n, *control, *target),
        Gate::PrepareState { register, amplitudes } => apply_prepare(amps, n, register, amplitudes),
        Gate::MeasureZ { .. } | Gate::ConditionedPauli { .. } => {
            unreachable!("apply_linear called on a non-linear instruction")
        }
    }
}

pub(crate) fn apply_pauli(amps: &mut [C64], n: usize, pauli: Pauli, qubit: usize) {
    match pauli {
        Pauli::X => apply_linear(amps, n, &Gate::X(qubit)),
        Pauli::Z => apply_linear(amps, n, &Gate::Z(qubit)),
    }
}

/// Zero the amplitudes inconsistent with `outcome` on `qubit`; returns the
/// retained squared norm.
pub(crate) fn project(amps: &mut [C64], n: usize, qubit: usize, outcome: u8) -> f64 {
    let mask = qubit_mask(n, qubit);
    let mut kept = 0.0;
    for (idx, a) in amps.iter_mut().enumerate() {
        let bit = u8::from(idx & mask != 0);
        if bit == outcome {
            kept += a.norm_sqr();
        } else {
            *a = ZERO;
        }
    }
    kept
}

fn measure<R: Rng + ?Sized>(amps: &mut [C64], n: usize, qubit: usize, rng: &mut R) -> u8 {
    let mask = qubit_mask(n, qubit);
    let p1: f64 = amps.iter().enumerate().filter(|(idx, _)| idx & mask != 0).map(|(_, a)| a.norm_sqr()).sum();
    let outcome = u8::from(rng.gen::<f64>() < p1);
    let kept = project(amps, n, qubit, outcome);
    let scale = 1.0 / kept.sqrt();
    for a in amps.iter_mut() {
        *a *= scale;
    }
    outcome
}

/// Runs a validated circuit from `|0…0⟩`.
pub fn execute<R: Rng + ?Sized>(c: &Circuit, rng: &mut R) -> (Statevector, ShotRecord) {
    let n = c.num_qubits;
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = ONE;
    let mut bits = vec![None; c.num_classical_bits];
    for g in &c.gates {
        match g {
            Gate::MeasureZ { qubit, bit } => bits[*bit] = Some(measure(&mut amps, n, *qubit, rng)),
            Gate::ConditionedPauli { pauli, qubit, bit } => {
                if bits[*bit] == Some(1) {
                    apply_pauli(&mut amps, n, *pauli, *qubit);
                }
            }
            other => apply_linear(&mut amps, n, other),
        }
    }
    let parity = c.sign_bits.iter().filter(|&&b| bits[b] == Some(1)).count() % 2;
    let record = ShotRecord { bits, sign_factor: if parity == 0 { 1 } else { -1 } };
    (Statevector::from_raw(n, amps), record)
}

/// Validates and runs `c` with a generator seeded from `seed`.
pub fn simulate_statevector(c: &Circuit, seed: u64) -> Result<(Statevector, ShotRecord)> {
    c.validate()?;
    Ok(execute(c, &mut rng_from_seed(seed)))
}

/// Qubit-indexed bitmask for amplitude index `idx` (bit `q` = qubit `q`).
pub fn index_to_bits(idx: usize, n: usize) -> u64 {
    (0..n).filter(|&q| idx & qubit_mask(n, q) != 0).fold(0u64, |acc, q| acc | (1 << q))
}

/// Born-rule sample of all qubits, returned as an amplitude index.
pub fn sample_index<R: Rng + ?Sized>(state: &Statevector, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let amps = state.amplitudes();
    for (idx, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if u < acc {
            return idx;
        }
    }
    // rounding: fall back to the last index with non-zero weight
    amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0)
}

/// `Σ_s |⟨s|ψ_out⟩|² f(s)` for a measurement-free circuit.
pub fn exact_expectation(c: &Circuit, f: impl Fn(u64) -> f64) -> Result<f64> {
    if c.has_measurements() {
        return Err(Error::MeasurementPresent);
    }
    let (state, _) = simulate_statevector(c, 0)?;
    Ok(expectation_of(&state, f))
}

pub fn expectation_of(state: &Statevector, f: impl Fn(u64) -> f64) -> f64 {
    let n = state.num_qubits();
    state.amplitudes().iter().enumerate().map(|(idx, a)| a.norm_sqr() * f(index_to_bits(idx, n))).sum()
}
