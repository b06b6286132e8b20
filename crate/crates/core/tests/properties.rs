mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qcut::circuit::{build_multi_rz_ladder, gates_unitary, Circuit, Gate, Partition};
use qcut::cutting::{
    cut_parallel_ancilla_free, gamma_independent, gamma_joint, lower_bound_gamma, reduce_multiqubit_rotation,
    rzz_layer_unitary, CutPlan, Scheme,
};
use qcut::observable::Observable;
use qcut::qpd::{pure_state_qpd, pure_state_qpd_from_expansion, verify_qpd};
use qcut::tensor::{schmidt_decompose, Statevector, C64};

fn state(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            v.into_iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect()
        })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(2, 2), (2, 4), (4, 2), (4, 4), (2, 8), (8, 4)])
}

fn angles(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_reconstructs_state((da, db, psi) in dims().prop_flat_map(|(a, b)| (Just(a), Just(b), state(a * b)))) {
        let sd = schmidt_decompose(&Statevector::new(psi.clone()).unwrap(), da, db).unwrap();
        let back = sd.reconstruct();
        let err: f64 = back.iter().zip(&psi).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err < 1e-10);
        let total: f64 = sd.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(sd.coefficients.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn qpd_reaches_robustness_bound(
        (da, db, psi) in dims().prop_flat_map(|(a, b)| (Just(a), Just(b), state(a * b))),
        alpha in 3usize..7,
    ) {
        let sv = Statevector::new(psi.clone()).unwrap();
        let qpd = pure_state_qpd(&sv, da, db, alpha).unwrap();
        let s: f64 = schmidt(&psi, da, db).iter().sum();
        prop_assert!((qpd.kappa() - (2.0 * s * s - 1.0)).abs() < 1e-10);
        prop_assert!(verify_qpd(&qpd, &sv.to_density()).unwrap() < 1e-10);
    }

    // Flipping the sign of expansion coefficients only flips the signs of the
    // cross terms predicted by the label.
    #[test]
    fn sign_flip_closure(c in prop::collection::vec(0.05f64..1.0, 2..=4), flips in 0usize..4, alpha in 3usize..6) {
        let m = c.len();
        let dim = m.next_power_of_two();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let c: Vec<f64> = c.iter().map(|x| x / norm).collect();
        let flipped: Vec<f64> = (0..m).map(|j| if (j & flips).count_ones() % 2 == 1 { -c[j] } else { c[j] }).collect();
        let basis = |k: usize| (0..dim).map(|x| if x == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect::<Vec<_>>();
        let left: Vec<_> = (0..m).map(basis).collect();
        let a = pure_state_qpd_from_expansion(&c, &left, &left, alpha).unwrap();
        let b = pure_state_qpd_from_expansion(&flipped, &left, &left, alpha).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.terms.iter().zip(&b.terms) {
            prop_assert_eq!(x.label, y.label);
            prop_assert!((x.coefficient * x.label.outcome_sign(flips) - y.coefficient).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_never_exceeds_independent(t in angles(6)) {
        prop_assert!(gamma_joint(&t) <= gamma_independent(&t) + 1e-12);
        prop_assert!(gamma_joint(&t) >= 1.0);
    }

    #[test]
    fn lower_bound_equals_joint(t in angles(2)) {
        let d = 1 << t.len();
        prop_assert!((lower_bound_gamma(&rzz_layer_unitary(&t), d, d).unwrap() - gamma_joint(&t)).abs() < 1e-12);
    }

    #[test]
    fn parallel_kappa_is_gamma(t in angles(3)) {
        let d = cut_parallel_ancilla_free(&t).unwrap();
        prop_assert!((d.kappa() - gamma_joint(&t)).abs() < 1e-10);
    }

    #[test]
    fn ladder_matches_rotation(k in 1usize..=4, angle in -3.0f64..3.0) {
        let qubits: Vec<usize> = (0..k).collect();
        let ladder = build_multi_rz_ladder(angle, &qubits).unwrap();
        let direct = gates_unitary(k, &[Gate::MultiRz { qubits: qubits.clone(), angle }]).unwrap();
        let got = gates_unitary(k, &ladder).unwrap();
        prop_assert!(got.sub(&direct).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn rotation_reduction_is_exact(na in 1usize..=3, nb in 1usize..=3, angle in -3.0f64..3.0) {
        let n = na + nb;
        let partition: Vec<Partition> = (0..n).map(|q| if q < na { Partition::A } else { Partition::B }).collect();
        let gate = Gate::MultiRz { qubits: (0..n).collect(), angle };
        let (before, core, after) = reduce_multiqubit_rotation(&gate, &partition).unwrap();
        let mut seq = before;
        seq.push(core);
        seq.extend(after);
        let err = gates_unitary(n, &seq).unwrap().sub(&gates_unitary(n, &[gate]).unwrap()).unwrap().frobenius_norm();
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn circuit_json_round_trip(t in angles(3), extra in -3.0f64..3.0) {
        let n = t.len();
        let mut c = Circuit::new(2 * n, (0..2 * n).map(|q| if q < n { Partition::A } else { Partition::B }).collect());
        c.extend((0..2 * n).map(Gate::H));
        for (s, &a) in t.iter().enumerate() {
            c.push(Gate::Rzz { qubits: [s, n + s], angle: a });
        }
        c.push(Gate::Rz { qubit: 0, angle: extra });
        let once = Circuit::from_json(&c.to_json().unwrap()).unwrap();
        let twice = Circuit::from_json(&once.to_json().unwrap()).unwrap();
        prop_assert_eq!(&once, &c);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn observable_values_bounded(w in prop::collection::vec((-1.0f64..1.0, 1u64..16), 1..4), bits in 0u64..16) {
        let total: f64 = w.iter().map(|(c, _)| c.abs()).sum();
        let spec: Vec<String> = w
            .iter()
            .map(|(c, m)| {
                let zs: Vec<String> = (0..4).filter(|q| (m >> q) & 1 == 1).map(|q| format!("z{q}")).collect();
                format!("{} {}", c / total, zs.join(" "))
            })
            .collect();
        let obs = Observable::parse(&spec.join(" + "), 4).unwrap();
        prop_assert!(obs.eval(bits).abs() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn every_term_splits_locally(t in angles(2), scheme in prop::sample::select(vec![Scheme::Independent, Scheme::JointTeleport, Scheme::ParallelAncillaFree])) {
        let n = t.len();
        let mut c = Circuit::new(2 * n, (0..2 * n).map(|q| if q < n { Partition::A } else { Partition::B }).collect());
        c.extend((0..2 * n).map(Gate::H));
        for (s, &a) in t.iter().enumerate() {
            c.push(Gate::Rzz { qubits: [s, n + s], angle: a });
        }
        let plan = CutPlan::new(&c, scheme, 3).unwrap();
        for term in &plan.decomposition.terms {
            prop_assert!(plan.bind(term).is_communication_free());
            let (a, b) = plan.fragments(term).unwrap();
            prop_assert!(a.circuit.partition.iter().all(|&p| p == Partition::A));
            prop_assert!(b.circuit.partition.iter().all(|&p| p == Partition::B));
        }
    }
}
