#![allow(dead_code)]

//! Dense reference implementations on nalgebra, written independently of the
//! library's own linear algebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qcut::circuit::Circuit;
use qcut::tensor::{ComplexMatrix, C64};
use rand::Rng;

pub type CMat = DMatrix<Complex64>;

pub const BENCHMARKS: [&str; 5] = ["cut1", "ring6", "cnot_pair", "multirz", "qaoa8"];

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load(name: &str) -> Circuit {
    let text = std::fs::read_to_string(data_path(&format!("{name}.json"))).unwrap();
    Circuit::from_json(&text).unwrap()
}

pub fn golden_toffoli() -> f64 {
    let text = std::fs::read_to_string(data_path("toffoli_lower_bound.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["gamma_lower"].as_f64().unwrap()
}

pub fn to_dmatrix(m: &ComplexMatrix) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

pub fn from_dmatrix(m: &CMat) -> ComplexMatrix {
    let data: Vec<C64> =
        (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| (r, c))).map(|(r, c)| m[(r, c)]).collect();
    ComplexMatrix::from_vec(m.nrows(), m.ncols(), data).unwrap()
}

/// Diagonal of `⊗_s R_zz(θ_s)` on qubits `(s, n + s)`, qubit 0 most
/// significant.
pub fn rzz_layer(thetas: &[f64]) -> CMat {
    let n = thetas.len();
    let q = 2 * n;
    let d = 1usize << q;
    let bit = |idx: usize, k: usize| (idx >> (q - 1 - k)) & 1;
    let diag: Vec<Complex64> = (0..d)
        .map(|idx| {
            let phase: f64 = thetas
                .iter()
                .enumerate()
                .map(|(s, t)| {
                    let z = if bit(idx, s) == bit(idx, n + s) { 1.0 } else { -1.0 };
                    -t / 2.0 * z
                })
                .sum();
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    CMat::from_diagonal(&DVector::from_vec(diag))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Column-stacking superoperator of `ρ ↦ UρU†`.
pub fn unitary_superop(u: &CMat) -> CMat {
    kron(&u.map(|z| z.conj()), u)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Schmidt coefficients of `psi` on `C^{da} ⊗ C^{db}` (A index major).
pub fn schmidt(psi: &[Complex64], da: usize, db: usize) -> Vec<f64> {
    singular_values(&CMat::from_fn(da, db, |a, b| psi[a * db + b]))
}

/// `2(Σ c)² − 1` from the Schmidt coefficients of the Choi state of `u`,
/// where the first factor of `u` has dimension `da`.
pub fn choi_gamma(u: &CMat, da: usize, db: usize) -> f64 {
    let d = (da * db) as f64;
    // rows (out_a, in_a), columns (out_b, in_b)
    let m = CMat::from_fn(da * da, db * db, |r, c| {
        let (oa, ia) = (r / da, r % da);
        let (ob, ib) = (c / db, c % db);
        u[(oa * db + ob, ia * db + ib)] / d.sqrt()
    });
    let s: f64 = singular_values(&m).iter().sum();
    2.0 * s * s - 1.0
}

pub fn toffoli() -> CMat {
    let mut u = CMat::identity(8, 8);
    u[(6, 6)] = Complex64::new(0.0, 0.0);
    u[(7, 7)] = Complex64::new(0.0, 0.0);
    u[(6, 7)] = Complex64::new(1.0, 0.0);
    u[(7, 6)] = Complex64::new(1.0, 0.0);
    u
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

pub fn frobenius(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}
