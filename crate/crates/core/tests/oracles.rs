mod common;

use common::*;
use qcut::circuit::gates_unitary;
use qcut::cutting::{
    cut_independent, cut_joint_teleport, cut_parallel_ancilla_free, lower_bound_gamma, normalize, reconstruct,
    reconstruct_channel, rzz_layer_unitary,
};
use qcut::tensor::{choi_schmidt, schmidt_decompose, Statevector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn rzz_layer_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=3 {
        let t = random_angles(&mut rng, n);
        assert!(frobenius(&to_dmatrix(&rzz_layer_unitary(&t)), &rzz_layer(&t)) < 1e-13);
    }
}

#[test]
fn dense_channels_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=2 {
        for _ in 0..3 {
            let t = random_angles(&mut rng, n);
            let target = unitary_superop(&rzz_layer(&t));
            for d in [
                cut_parallel_ancilla_free(&t).unwrap(),
                cut_joint_teleport(&t, 3).unwrap(),
                cut_independent(&t).unwrap(),
            ] {
                let got = to_dmatrix(reconstruct_channel(&d).unwrap().matrix());
                assert!(frobenius(&got, &target) < 1e-9, "{:?} {t:?}", d.scheme);
            }
        }
    }
}

#[test]
fn three_gate_parallel_and_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_angles(&mut rng, 3);
    let u = from_dmatrix(&rzz_layer(&t));
    for d in [cut_parallel_ancilla_free(&t).unwrap(), cut_independent(&t).unwrap()] {
        assert!(reconstruct(&d).unwrap().distance_to_unitary(&u).unwrap() < 1e-9);
    }
}

#[test]
fn schmidt_coefficients_match_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (da, db) in [(2, 2), (2, 8), (4, 4), (8, 2), (8, 8)] {
        let psi = random_state(&mut rng, da * db);
        let oracle = schmidt(&psi, da, db);
        let got = schmidt_decompose(&Statevector::new(psi).unwrap(), da, db).unwrap();
        for (k, c) in got.coefficients.iter().enumerate() {
            assert!((c - oracle[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn choi_bound_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        let t = random_angles(&mut rng, n);
        let d = 1 << n;
        let lib = lower_bound_gamma(&rzz_layer_unitary(&t), d, d).unwrap();
        assert!((lib - choi_gamma(&rzz_layer(&t), d, d)).abs() < 1e-12);
    }
    let c = choi_schmidt(&from_dmatrix(&toffoli()), 1).unwrap();
    assert_eq!(c.dims, (4, 16));
}

#[test]
fn toffoli_golden_value() {
    let oracle = choi_gamma(&toffoli(), 2, 4);
    assert!((oracle - golden_toffoli()).abs() < 1e-12, "oracle {oracle:.17}");
    let lib = lower_bound_gamma(&qcut::cutting::toffoli(), 2, 4).unwrap();
    assert!((lib - golden_toffoli()).abs() < 1e-12);
    assert!(golden_toffoli() < 3.0);
}

#[test]
fn normalization_preserves_unitary() {
    for name in BENCHMARKS {
        let c = load(name);
        let n = normalize(&c).unwrap();
        let a = to_dmatrix(&gates_unitary(c.num_qubits, &c.gates).unwrap());
        let b = to_dmatrix(&gates_unitary(n.num_qubits, &n.gates).unwrap());
        // CNOT rewrites agree up to a global phase
        let phase = (a.adjoint() * &b).trace() / a.nrows() as f64;
        assert!((phase.norm() - 1.0).abs() < 1e-12, "{name}");
        assert!(frobenius(&a.map(|z| z * phase), &b) < 1e-10, "{name}");
    }
}
