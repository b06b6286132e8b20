use super::matrix::{ComplexMatrix, C64, ZERO};
use super::state::Statevector;
use super::svd::svd;
use crate::error::{Error, Result};

/// Schmidt coefficients at or below this value are dropped.
pub const SCHMIDT_PRUNE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Non-negative, descending.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
    pub dims: (usize, usize),
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ_j c_j |u_j⟩ ⊗ |v_j⟩`
    pub fn reconstruct(&self) -> Vec<C64> {
        let (da, db) = self.dims;
        let mut out = vec![ZERO; da * db];
        for ((c, u), v) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for (i, &ui) in u.iter().enumerate() {
                for (j, &vj) in v.iter().enumerate() {
                    out[i * db + j] += ui * vj * *c;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition of a pure state across `dim_a ⊗ dim_b`, computed
/// from the SVD of the `dim_a x dim_b` amplitude matrix.
pub fn schmidt_decompose(psi: &Statevector, dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    schmidt_decompose_amplitudes(psi.amplitudes(), dim_a, dim_b)
}

fn schmidt_decompose_amplitudes(amps: &[C64], dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != amps.len() {
        return Err(Error::DimensionMismatch { expected: amps.len(), got: dim_a * dim_b });
    }
    let m = ComplexMatrix::from_vec(dim_a, dim_b, amps.to_vec())?;
    let s = svd(&m);
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for (k, &sigma) in s.singular_values.iter().enumerate() {
        if sigma <= SCHMIDT_PRUNE_TOL {
            continue;
        }
        coefficients.push(sigma);
        left_basis.push(s.u.column(k));
        // M = Σ σ u v†, so the right factor of the ket is conj(v).
        right_basis.push(s.v.column(k).iter().map(|z| z.conj()).collect());
    }
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis, dims: (dim_a, dim_b) })
}

/// Choi state `(U ⊗ I)|Ω⟩` with `|Ω⟩ = Σ_x |x⟩|x⟩ / √d`. System qubits come
/// first, reference qubits second.
pub fn choi_state(u: &ComplexMatrix) -> Result<Statevector> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary(u.unitarity_error()));
    }
    let q = u.num_qubits().ok_or(Error::InvalidArgument("unitary must act on qubits".into()))?;
    let d = 1usize << q;
    let norm = 1.0 / (d as f64).sqrt();
    let mut amps = vec![ZERO; d * d];
    for y in 0..d {
        for x in 0..d {
            amps[y * d + x] = u[(y, x)] * norm;
        }
    }
    Ok(Statevector::from_raw(2 * q, amps))
}

/// Schmidt decomposition of the Choi state of `u` across the cut that puts
/// the first `qubits_a` system qubits, together with their reference copies,
/// on side A.
pub fn choi_schmidt(u: &ComplexMatrix, qubits_a: usize) -> Result<SchmidtDecomposition> {
    let choi = choi_state(u)?;
    let q = choi.num_qubits() / 2;
    if qubits_a > q {
        return Err(Error::DimensionMismatch { expected: q, got: qubits_a });
    }
    let order: Vec<usize> =
        (0..qubits_a).chain(q..q + qubits_a).chain(qubits_a..q).chain(q + qubits_a..2 * q).collect();
    let permuted = choi.permute_qubits(&order)?;
    let da = 1usize << (2 * qubits_a);
    schmidt_decompose(&permuted, da, permuted.dim() / da)
}
