mod common;

use common::*;
use qcut::circuit::Circuit;
use qcut::cutting::{CutPlan, Scheme};
use qcut::estimator::{estimate_expectation, estimate_uncut, estimate_with, exact_value, EstimateOptions};
use qcut::observable::Observable;

const SCHEMES: [Scheme; 3] = [Scheme::Independent, Scheme::JointTeleport, Scheme::ParallelAncillaFree];

fn parity(c: &Circuit) -> impl Fn(u64) -> f64 + Sync {
    let obs = Observable::parity(c.num_qubits);
    move |b| obs.eval(b)
}

fn seed_means(plan: &CutPlan, f: &(dyn Fn(u64) -> f64 + Sync), seeds: u64, shots: usize) -> (f64, f64) {
    let means: Vec<f64> = (0..seeds).map(|s| estimate_expectation(plan, f, shots, 1000 + s).unwrap().mean).collect();
    let n = means.len() as f64;
    let grand = means.iter().sum::<f64>() / n;
    let sd = (means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    (grand, sd / n.sqrt())
}

#[test]
fn unbiased_for_every_scheme() {
    for name in ["cut1", "ring6", "cnot_pair", "multirz"] {
        let c = load(name);
        let f = parity(&c);
        for scheme in SCHEMES {
            let plan = CutPlan::new(&c, scheme, 3).unwrap();
            let exact = exact_value(&plan, &f).unwrap();
            let (mean, se) = seed_means(&plan, &f, 40, 2000);
            assert!((mean - exact).abs() <= 5.0 * se, "{name} {scheme}: {mean} vs {exact} (se {se})");
        }
    }
}

#[test]
fn weighted_observable_unbiased() {
    let c = load("qaoa8");
    let obs = Observable::parse("0.5 z0 z1 + 0.25 z3 z4 + -0.25 z7", 8).unwrap();
    let f = move |b: u64| obs.eval(b);
    let plan = CutPlan::new(&c, Scheme::ParallelAncillaFree, 4).unwrap();
    let exact = exact_value(&plan, &f).unwrap();
    let e = estimate_expectation(&plan, &f, 200_000, 3).unwrap();
    assert!((e.mean - exact).abs() <= 5.0 * e.stderr, "{} vs {exact}", e.mean);
}

// Dropping the measurement-outcome signs must bias the estimate. With the
// first qubit in |+> and <Z> = 1/2 on the second, R_zz(θ) gives the first
// qubit <Y> = ±sin(θ)/2, carried entirely by the cross terms.
#[test]
fn outcome_signs_are_required() {
    let c = load("sign_probe");
    let obs = Observable::parse("z 0", 2).unwrap();
    let f = move |b: u64| obs.eval(b);
    for scheme in SCHEMES {
        let plan = CutPlan::new(&c, scheme, 4).unwrap();
        let exact = exact_value(&plan, &f).unwrap();
        assert!((exact.abs() - 1.1f64.sin() / 2.0).abs() < 1e-12);
        let with = estimate_with(&plan, &f, 100_000, 9, EstimateOptions::default()).unwrap();
        let without =
            estimate_with(&plan, &f, 100_000, 9, EstimateOptions { apply_outcome_signs: false, ..Default::default() })
                .unwrap();
        assert!((with.mean - exact).abs() <= 5.0 * with.stderr, "{scheme}");
        assert!((without.mean - exact).abs() > 5.0 * without.stderr, "{scheme}: unsigned estimate {}", without.mean);
    }
}

#[test]
fn identity_cut_has_no_overhead() {
    let c = load("identity_cut");
    let f = parity(&c);
    for scheme in SCHEMES {
        let plan = CutPlan::new(&c, scheme, 4).unwrap();
        assert_eq!(plan.decomposition.terms.len(), 1, "{scheme}");
        assert_eq!(plan.decomposition.kappa(), 1.0);
        let cut = estimate_expectation(&plan, &f, 20_000, 4).unwrap();
        let uncut = estimate_uncut(&plan.circuit, &f, 20_000, 4).unwrap();
        let exact = exact_value(&plan, &f).unwrap();
        let expected_se = ((1.0 - exact * exact) / 20_000.0).sqrt();
        assert!((cut.stderr - expected_se).abs() < 0.1 * expected_se);
        assert!((uncut.stderr - expected_se).abs() < 0.1 * expected_se);
        assert!((cut.mean - exact).abs() <= 5.0 * cut.stderr);
    }
}

#[test]
fn joint_variance_below_independent() {
    let c = load("cnot_pair");
    let f = parity(&c);
    let var = |scheme| {
        let e = estimate_expectation(&CutPlan::new(&c, scheme, 4).unwrap(), &f, 100_000, 21).unwrap();
        e.stderr * e.stderr * e.shots as f64
    };
    let (j, p, i) = (var(Scheme::JointTeleport), var(Scheme::ParallelAncillaFree), var(Scheme::Independent));
    assert!(j < i && p < i, "joint {j} parallel {p} independent {i}");
}

#[test]
fn thread_count_does_not_change_results() {
    let c = load("qaoa8");
    let f = parity(&c);
    let plan = CutPlan::new(&c, Scheme::JointTeleport, 4).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_expectation(&plan, &f, 3000, 99).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    assert_ne!(one, estimate_expectation(&plan, &f, 3000, 100).unwrap());
}

#[test]
fn tallies_account_for_every_shot() {
    let c = load("ring6");
    let f = parity(&c);
    let plan = CutPlan::new(&c, Scheme::ParallelAncillaFree, 4).unwrap();
    let e = estimate_expectation(&plan, &f, 10_000, 1).unwrap();
    assert_eq!(e.per_term.iter().map(|t| t.shots).sum::<usize>(), 10_000);
    let total: f64 = e.per_term.iter().map(|t| t.sum).sum();
    assert!((total / 10_000.0 - e.mean).abs() < 1e-12);
}
