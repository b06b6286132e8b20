//! Monte-Carlo estimation of expectation values from cut circuits.
//!
//! Shot `t` draws its term with the `TermChoice` stream of `(seed, t)` and
//! runs fragment A and fragment B with their own streams, so the result does
//! not depend on execution order or thread count. The post-processing
//! function sees the data-qubit bits of both fragments merged into one mask
//! (bit `q` = circuit qubit `q`); ancilla bits only enter through the sign.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{exact_expectation, execute, sample_index, simulate_statevector, Circuit};
use crate::cutting::{CutDecomposition, CutPlan, Fragment};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, shot_rng, Stream};

const RANGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotPlan {
    /// Shots per term, in decomposition order.
    pub counts: Vec<usize>,
    pub total: usize,
    pub seed: u64,
}

struct TermSampler {
    cumulative: Vec<f64>,
    kappa: f64,
}

impl TermSampler {
    fn new(d: &CutDecomposition) -> Result<Self> {
        if d.terms.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        let mut acc = 0.0;
        let cumulative = d
            .terms
            .iter()
            .map(|t| {
                acc += t.weight.abs();
                acc
            })
            .collect();
        Ok(Self { cumulative, kappa: acc })
    }

    fn term_of_shot(&self, seed: u64, shot: u64) -> usize {
        let u = shot_rng(seed, shot, Stream::TermChoice).gen::<f64>() * self.kappa;
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

/// Multinomial allocation of `n_shots` over terms with `p_i = |w_i|/κ`.
pub fn plan_shots(d: &CutDecomposition, n_shots: usize, seed: u64) -> Result<ShotPlan> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    let sampler = TermSampler::new(d)?;
    let mut counts = vec![0; d.terms.len()];
    for t in 0..n_shots as u64 {
        counts[sampler.term_of_shot(seed, t)] += 1;
    }
    Ok(ShotPlan { counts, total: n_shots, seed })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecutionOrder {
    /// Fragment A then fragment B for each shot.
    #[default]
    Interleaved,
    /// Every A fragment before any B fragment.
    AThenB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimateOptions {
    /// Multiply each shot by the parity of the term's sign bits.
    pub apply_outcome_signs: bool,
    pub order: ExecutionOrder,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { apply_outcome_signs: true, order: ExecutionOrder::Interleaved }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermTally {
    pub label: String,
    pub weight: f64,
    pub shots: usize,
    /// Sum of this term's per-shot contributions.
    pub sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub kappa: f64,
    pub shots: usize,
    pub seed: u64,
    pub per_term: Vec<TermTally>,
    /// Wall time; left out of serialized output so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for Estimate {
    fn eq(&self, o: &Self) -> bool {
        self.mean.to_bits() == o.mean.to_bits()
            && self.stderr.to_bits() == o.stderr.to_bits()
            && self.kappa.to_bits() == o.kappa.to_bits()
            && self.shots == o.shots
            && self.seed == o.seed
            && self.per_term == o.per_term
    }
}

/// Sample mean and standard error, summed in index order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

struct FragmentOutcome {
    data_bits: u64,
    bits: Vec<(usize, u8)>,
}

fn run_fragment(f: &Fragment, seed: u64) -> FragmentOutcome {
    let mut rng = crate::rng::rng_from_seed(seed);
    let (state, record) = execute(&f.circuit, &mut rng);
    let idx = sample_index(&state, &mut rng);
    let n = f.circuit.num_qubits;
    let mut data_bits = 0u64;
    for (i, q) in f.data_qubits.iter().enumerate() {
        if let Some(q) = q {
            if (idx >> (n - 1 - i)) & 1 == 1 {
                data_bits |= 1 << q;
            }
        }
    }
    let bits =
        f.bits.iter().enumerate().filter_map(|(local, &global)| record.bit(local).map(|v| (global, v))).collect();
    FragmentOutcome { data_bits, bits }
}

fn check_range(v: f64) -> Result<f64> {
    if !v.is_finite() || v.abs() > 1.0 + RANGE_TOL {
        return Err(Error::ValueOutOfRange(v));
    }
    Ok(v)
}

/// Cut-circuit estimate of `E[f]` with default options.
pub fn estimate_expectation(
    plan: &CutPlan,
    f: &(dyn Fn(u64) -> f64 + Sync),
    n_shots: usize,
    seed: u64,
) -> Result<Estimate> {
    estimate_with(plan, f, n_shots, seed, EstimateOptions::default())
}

pub fn estimate_with(
    plan: &CutPlan,
    f: &(dyn Fn(u64) -> f64 + Sync),
    n_shots: usize,
    seed: u64,
    opts: EstimateOptions,
) -> Result<Estimate> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    let start = Instant::now();
    let d = &plan.decomposition;
    let sampler = TermSampler::new(d)?;
    let fragments: Vec<(Fragment, Fragment)> = d.terms.iter().map(|t| plan.fragments(t)).collect::<Result<_>>()?;
    let choice: Vec<usize> = (0..n_shots as u64).into_par_iter().map(|t| sampler.term_of_shot(seed, t)).collect();

    let run_a = |t: usize| run_fragment(&fragments[choice[t]].0, derive_seed(seed, t as u64, Stream::FragmentA));
    let run_b = |t: usize| run_fragment(&fragments[choice[t]].1, derive_seed(seed, t as u64, Stream::FragmentB));
    let outcomes: Vec<(FragmentOutcome, FragmentOutcome)> = match opts.order {
        ExecutionOrder::Interleaved => (0..n_shots).into_par_iter().map(|t| (run_a(t), run_b(t))).collect(),
        ExecutionOrder::AThenB => {
            let a: Vec<_> = (0..n_shots).into_par_iter().map(run_a).collect();
            let b: Vec<_> = (0..n_shots).into_par_iter().map(run_b).collect();
            a.into_iter().zip(b).collect()
        }
    };

    let values: Vec<f64> = outcomes
        .par_iter()
        .enumerate()
        .map(|(t, (a, b))| {
            let term = &d.terms[choice[t]];
            let fv = check_range(f(a.data_bits | b.data_bits))?;
            let mut sign = term.weight.signum();
            if opts.apply_outcome_signs {
                let ones =
                    a.bits.iter().chain(&b.bits).filter(|(bit, v)| *v == 1 && term.sign_bits.contains(bit)).count();
                if ones % 2 == 1 {
                    sign = -sign;
                }
            }
            Ok(sampler.kappa * sign * fv)
        })
        .collect::<Result<_>>()?;

    let (mean, stderr) = mean_and_stderr(&values);
    let mut per_term: Vec<TermTally> =
        d.terms.iter().map(|t| TermTally { label: t.label.clone(), weight: t.weight, shots: 0, sum: 0.0 }).collect();
    for (t, v) in values.iter().enumerate() {
        per_term[choice[t]].shots += 1;
        per_term[choice[t]].sum += v;
    }
    Ok(Estimate { mean, stderr, kappa: sampler.kappa, shots: n_shots, seed, per_term, elapsed: start.elapsed() })
}

/// Ordinary shot sampling of the uncut circuit.
pub fn estimate_uncut(c: &Circuit, f: &(dyn Fn(u64) -> f64 + Sync), n_shots: usize, seed: u64) -> Result<Estimate> {
    if n_shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    if c.has_measurements() {
        return Err(Error::MeasurementPresent);
    }
    let start = Instant::now();
    let (state, _) = simulate_statevector(c, seed)?;
    let n = c.num_qubits;
    let values: Vec<f64> = (0..n_shots as u64)
        .into_par_iter()
        .map(|t| {
            let idx = sample_index(&state, &mut shot_rng(seed, t, Stream::Uncut));
            check_range(f(crate::circuit::index_to_bits(idx, n)))
        })
        .collect::<Result<_>>()?;
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(Estimate { mean, stderr, kappa: 1.0, shots: n_shots, seed, per_term: vec![], elapsed: start.elapsed() })
}

/// Exact value of `E[f]` on the uncut circuit.
pub fn exact_value(plan: &CutPlan, f: &(dyn Fn(u64) -> f64 + Sync)) -> Result<f64> {
    exact_expectation(&plan.circuit, f)
}

#[derive(Clone, Debug, Serialize)]
pub struct Overhead {
    /// Variance of the cut estimator over variance of the uncut one.
    pub ratio: f64,
    /// Normal-theory standard error of `ratio`.
    pub ratio_stderr: f64,
    pub variance_cut: f64,
    pub variance_uncut: f64,
    pub trials: usize,
    pub shots_per_trial: usize,
}

fn sample_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
}

/// Ratio of the spread of trial means between the cut and uncut estimators.
pub fn empirical_overhead(
    plan: &CutPlan,
    f: &(dyn Fn(u64) -> f64 + Sync),
    n_trials: usize,
    shots_per_trial: usize,
    seed: u64,
) -> Result<Overhead> {
    if n_trials < 2 {
        return Err(Error::InvalidArgument("need at least two trials".into()));
    }
    let mut cut = Vec::with_capacity(n_trials);
    let mut uncut = Vec::with_capacity(n_trials);
    for r in 0..n_trials as u64 {
        cut.push(estimate_expectation(plan, f, shots_per_trial, derive_seed(seed, r, Stream::FragmentA))?.mean);
        uncut.push(estimate_uncut(&plan.circuit, f, shots_per_trial, derive_seed(seed, r, Stream::Uncut))?.mean);
    }
    let variance_cut = sample_variance(&cut);
    let variance_uncut = sample_variance(&uncut);
    let ratio = variance_cut / variance_uncut;
    let ratio_stderr = ratio * (4.0 / (n_trials as f64 - 1.0)).sqrt();
    Ok(Overhead { ratio, ratio_stderr, variance_cut, variance_uncut, trials: n_trials, shots_per_trial })
}
