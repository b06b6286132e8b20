//! Quasi-probability decomposition of a bipartite pure state into local
//! product states.
//!
//! For `|ψ⟩ = Σ_j c_j |φ_j⟩|φ'_j⟩` with orthonormal local families,
//!
//! ```text
//! |ψ⟩⟨ψ| = Σ_j c_j² |φ_j φ'_j⟩⟨·| + 2 Σ_{i>j} c_i c_j (σ⁺_ij − σ⁻_ij)
//! σ^±_ij = (1/α) Σ_r |ξ^±_rij⟩⟨·| ⊗ |τ_rij⟩⟨·|
//! ξ^± = (φ_i ± e^{iφ_r} φ_j)/√2,  τ = (φ'_i + e^{-iφ_r} φ'_j)/√2
//! ```
//!
//! with `φ_r = 2πr/α`. Only the weights depend on `c`, never the states.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::tensor::{schmidt_decompose, ComplexMatrix, DensityMatrix, Statevector, C64, SCHMIDT_PRUNE_TOL};

const PHASE_SUM_TOL: f64 = 1e-12;

pub const DEFAULT_ALPHA: usize = 4;

fn check_coefficients(c: &[f64]) -> Result<()> {
    if c.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidArgument("Schmidt coefficients must be finite and non-negative".into()));
    }
    let norm: f64 = c.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm.sqrt()));
    }
    Ok(())
}

/// Robustness of entanglement `(Σ c_j)² − 1` of a pure state.
pub fn robustness(coefficients: &[f64]) -> Result<f64> {
    check_coefficients(coefficients)?;
    let s: f64 = coefficients.iter().sum();
    Ok(s * s - 1.0)
}

/// `1 + 2R = 2(Σ c_j)² − 1`
pub fn gamma_from_schmidt(coefficients: &[f64]) -> Result<f64> {
    Ok(1.0 + 2.0 * robustness(coefficients)?)
}

/// `φ_r = 2πr/α` for `r = 1..=α`.
pub fn phase_set(alpha: usize) -> Result<Vec<f64>> {
    if alpha < 3 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let phases: Vec<f64> = (1..=alpha).map(|r| 2.0 * PI * r as f64 / alpha as f64).collect();
    debug_assert!(phase_sums(&phases).0 < PHASE_SUM_TOL && phase_sums(&phases).1 < PHASE_SUM_TOL);
    Ok(phases)
}

/// `(|Σ e^{iφ_r}|, |Σ e^{2iφ_r}|)`
pub fn phase_sums(phases: &[f64]) -> (f64, f64) {
    let s1: C64 = phases.iter().map(|&p| C64::from_polar(1.0, p)).sum();
    let s2: C64 = phases.iter().map(|&p| C64::from_polar(1.0, 2.0 * p)).sum();
    (s1.norm(), s2.norm())
}

/// `e^{iφ_r}` rounded to the exact value when it lies on an axis, so that
/// α = 4 yields exactly `i, −1, −i, 1`.
pub(crate) fn phase_factor(phi: f64) -> C64 {
    let z = C64::from_polar(1.0, phi);
    let snap = |x: f64| {
        if x.abs() < 1e-15 {
            0.0
        } else if (x.abs() - 1.0).abs() < 1e-15 {
            x.signum()
        } else {
            x
        }
    };
    C64::new(snap(z.re), snap(z.im))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermLabel {
    Diagonal { j: usize },
    Cross { i: usize, j: usize, r: usize, plus: bool },
}

impl TermLabel {
    /// Sign picked up by this term when the expansion coefficients are
    /// replaced by `c_j (−1)^{popcount(j & flips)}`: cross terms `(i, j)`
    /// change sign when `flips` overlaps `i ⊕ j` an odd number of times.
    pub fn outcome_sign(&self, flips: usize) -> f64 {
        match *self {
            TermLabel::Diagonal { .. } => 1.0,
            TermLabel::Cross { i, j, .. } => {
                if ((i ^ j) & flips).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct QpdTerm {
    pub coefficient: f64,
    pub state_a: Statevector,
    pub state_b: Statevector,
    pub label: TermLabel,
}

impl QpdTerm {
    pub fn product_state(&self) -> Statevector {
        self.state_a.tensor(&self.state_b)
    }
}

#[derive(Clone, Debug)]
pub struct Qpd {
    pub terms: Vec<QpdTerm>,
    pub alpha: usize,
    pub dims: (usize, usize),
}

impl Qpd {
    /// `Σ |a_i|`
    pub fn kappa(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ a_i ρ_i^A ⊗ ρ_i^B`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dims.0 * self.dims.1;
        let mut out = ComplexMatrix::zeros(d, d);
        for t in &self.terms {
            let v = t.product_state();
            let amps = v.amplitudes();
            for r in 0..d {
                let ar = amps[r] * t.coefficient;
                if ar == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    out[(r, c)] += ar * amps[c].conj();
                }
            }
        }
        out
    }
}

/// Number of terms for Schmidt rank `m`: `m + α m (m − 1)`.
pub fn term_count(m: usize, alpha: usize) -> usize {
    m + alpha * m * (m.saturating_sub(1))
}

fn combine(a: &[C64], wa: C64, b: &[C64], wb: C64) -> Vec<C64> {
    a.iter().zip(b).map(|(&x, &y)| (x * wa + y * wb) * FRAC_1_SQRT_2).collect()
}

fn ket(v: Vec<C64>) -> Result<Statevector> {
    Statevector::new(v)
}

/// Decomposition from an explicit expansion with orthonormal `left` and
/// `right` families and real, possibly negative, coefficients. Entries with
/// `|c_j|` at or below the Schmidt pruning threshold are skipped.
pub fn pure_state_qpd_from_expansion(
    coefficients: &[f64],
    left: &[Vec<C64>],
    right: &[Vec<C64>],
    alpha: usize,
) -> Result<Qpd> {
    let phases = phase_set(alpha)?;
    if left.len() != coefficients.len() || right.len() != coefficients.len() {
        return Err(Error::DimensionMismatch { expected: coefficients.len(), got: left.len().min(right.len()) });
    }
    if coefficients.is_empty() {
        return Err(Error::EmptyDecomposition);
    }
    let norm: f64 = coefficients.iter().map(|c| c * c).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm.sqrt()));
    }
    let dims = (left[0].len(), right[0].len());
    let kept: Vec<usize> = (0..coefficients.len()).filter(|&j| coefficients[j].abs() > SCHMIDT_PRUNE_TOL).collect();
    let one = C64::new(1.0, 0.0);
    let mut terms = Vec::with_capacity(term_count(kept.len(), alpha));
    for &j in &kept {
        terms.push(QpdTerm {
            coefficient: coefficients[j] * coefficients[j],
            state_a: ket(left[j].clone())?,
            state_b: ket(right[j].clone())?,
            label: TermLabel::Diagonal { j },
        });
    }
    for (x, &i) in kept.iter().enumerate() {
        for &j in &kept[..x] {
            let w = 2.0 * coefficients[i] * coefficients[j] / alpha as f64;
            for (r, &phi) in phases.iter().enumerate() {
                let e = phase_factor(phi);
                let tau = ket(combine(&right[i], one, &right[j], e.conj()))?;
                for plus in [true, false] {
                    let s = if plus { e } else { -e };
                    terms.push(QpdTerm {
                        coefficient: if plus { w } else { -w },
                        state_a: ket(combine(&left[i], one, &left[j], s))?,
                        state_b: tau.clone(),
                        label: TermLabel::Cross { i, j, r: r + 1, plus },
                    });
                }
            }
        }
    }
    Ok(Qpd { terms, alpha, dims })
}

/// Optimal decomposition of `|ψ⟩⟨ψ|` built on its Schmidt decomposition
/// across `dim_a ⊗ dim_b`.
pub fn pure_state_qpd(psi: &Statevector, dim_a: usize, dim_b: usize, alpha: usize) -> Result<Qpd> {
    phase_set(alpha)?;
    let s = schmidt_decompose(psi, dim_a, dim_b)?;
    let mut q = pure_state_qpd_from_expansion(&s.coefficients, &s.left_basis, &s.right_basis, alpha)?;
    q.dims = (dim_a, dim_b);
    Ok(q)
}

/// Frobenius distance between the reconstructed operator and `target`.
pub fn verify_qpd(qpd: &Qpd, target: &DensityMatrix) -> Result<f64> {
    let d = target.matrix().rows();
    if qpd.terms.is_empty() {
        return Ok(target.matrix().frobenius_norm());
    }
    if qpd.dims.0 * qpd.dims.1 != d {
        return Err(Error::DimensionMismatch { expected: d, got: qpd.dims.0 * qpd.dims.1 });
    }
    Ok(qpd.reconstruct().sub(target.matrix())?.frobenius_norm())
}
