use super::matrix::{kron, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance on normalization, Hermiticity and trace checks.
pub const STATE_TOL: f64 = 1e-10;

/// Pure state on `num_qubits` qubits. Qubit 0 is the leftmost tensor factor,
/// so it corresponds to the most significant bit of an amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl Statevector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: len.next_power_of_two(), got: len });
        }
        let sv = Self { num_qubits: len.trailing_zeros() as usize, amplitudes };
        let norm = sv.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(sv)
    }

    /// Normalizes the input; fails only for the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero_state(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Self { num_qubits, amplitudes }
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self { num_qubits, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Self { num_qubits: self.num_qubits + other.num_qubits, amplitudes }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { num_qubits: self.num_qubits, matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes) }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Reorder qubits: qubit `q` of the result is qubit `order[q]` of `self`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<Self> {
        let n = self.num_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: order.len() });
        }
        let mut seen = vec![false; n];
        for &q in order {
            if q >= n || seen[q] {
                return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
            }
            seen[q] = true;
        }
        let mut out = vec![ZERO; self.dim()];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let mut new_idx = 0usize;
            for (new_q, &old_q) in order.iter().enumerate() {
                let bit = (idx >> (n - 1 - old_q)) & 1;
                new_idx |= bit << (n - 1 - new_q);
            }
            out[new_idx] = amp;
        }
        Ok(Self { num_qubits: n, amplitudes: out })
    }
}

/// Mixed state (or, when `signed`, any Hermitian operator built from a QPD).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a Hermitian matrix. Trace and positivity are not enforced here
    /// because signed QPD sums are carried in the same type.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let num_qubits = matrix
            .num_qubits()
            .ok_or(Error::DimensionMismatch { expected: matrix.rows().next_power_of_two(), got: matrix.cols() })?;
        if !matrix.is_hermitian(STATE_TOL) {
            return Err(Error::InvalidArgument("density matrix must be Hermitian".into()));
        }
        Ok(Self { num_qubits, matrix })
    }

    pub fn zeros(num_qubits: usize) -> Self {
        let d = 1 << num_qubits;
        Self { num_qubits, matrix: ComplexMatrix::zeros(d, d) }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { num_qubits: self.num_qubits + other.num_qubits, matrix: kron(&self.matrix, &other.matrix) }
    }

    /// Accumulate `weight * other` in place.
    pub fn add_weighted(&mut self, weight: f64, other: &Self) -> Result<()> {
        self.matrix.add_scaled(C64::new(weight, 0.0), &other.matrix)
    }

    /// Physical-state check: Hermitian with unit trace and purity at most one.
    pub fn is_physical(&self) -> bool {
        let purity = self.matrix.matmul(&self.matrix).map(|m| m.trace().re).unwrap_or(f64::INFINITY);
        self.matrix.is_hermitian(STATE_TOL) && (self.trace() - 1.0).abs() <= STATE_TOL && purity <= 1.0 + STATE_TOL
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Linear map on column-stacked density matrices: `vec(ρ)[i + j·d] = ρ[i][j]`.
/// With this convention `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn identity(num_qubits: usize) -> Self {
        Self { num_qubits, matrix: ComplexMatrix::identity(1 << (2 * num_qubits)) }
    }

    pub fn zeros(num_qubits: usize) -> Self {
        let d = 1 << (2 * num_qubits);
        Self { num_qubits, matrix: ComplexMatrix::zeros(d, d) }
    }

    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let two_n = matrix
            .num_qubits()
            .filter(|n| n % 2 == 0)
            .ok_or(Error::InvalidArgument("superoperator must be 4^n x 4^n".into()))?;
        Ok(Self { num_qubits: two_n / 2, matrix })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: rho.num_qubits });
        }
        let out = self.matrix.mul_vec(&vectorize(&rho.matrix))?;
        Ok(DensityMatrix { num_qubits: self.num_qubits, matrix: unvectorize(&out, 1 << self.num_qubits) })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        Ok(Self { num_qubits: self.num_qubits, matrix: self.matrix.matmul(&first.matrix)? })
    }

    pub fn add_weighted(&mut self, weight: f64, other: &Self) -> Result<()> {
        self.matrix.add_scaled(C64::new(weight, 0.0), &other.matrix)
    }
}

impl AsRef<ComplexMatrix> for SuperOperator {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn vectorize(m: &ComplexMatrix) -> Vec<C64> {
    let d = m.rows();
    let mut v = vec![ZERO; d * m.cols()];
    for j in 0..m.cols() {
        for i in 0..d {
            v[i + j * d] = m[(i, j)];
        }
    }
    v
}

pub fn unvectorize(v: &[C64], d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, v.len() / d);
    for (k, &z) in v.iter().enumerate() {
        m[(k % d, k / d)] = z;
    }
    m
}

/// Superoperator of `ρ ↦ UρU†`.
pub fn unitary_to_superop(u: &ComplexMatrix) -> Result<SuperOperator> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary(u.unitarity_error()));
    }
    kraus_to_superop(std::slice::from_ref(u))
}

/// Superoperator of `ρ ↦ Σ_k K ρ K†`, i.e. `Σ_k conj(K) ⊗ K` under column stacking.
/// No CPTN check is made.
pub fn kraus_to_superop(ks: &[ComplexMatrix]) -> Result<SuperOperator> {
    let first = ks.first().ok_or(Error::InvalidArgument("empty Kraus list".into()))?;
    let num_qubits = first
        .num_qubits()
        .ok_or(Error::DimensionMismatch { expected: first.rows().next_power_of_two(), got: first.cols() })?;
    let mut acc = SuperOperator::zeros(num_qubits);
    for k in ks {
        if k.rows() != first.rows() || k.cols() != first.cols() {
            return Err(Error::DimensionMismatch { expected: first.rows(), got: k.rows() });
        }
        acc.matrix.add_scaled(ONE, &kron(&k.conj(), k))?;
    }
    Ok(acc)
}
