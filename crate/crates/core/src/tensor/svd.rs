//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.
//!
//! Columns of a working copy of `A` are rotated pairwise until mutually
//! orthogonal; the same rotations accumulate into `V`. Accurate to working
//! precision for the small (≤ 256) dimensions used here.

use super::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;
const ORTHO_TOL: f64 = 1e-15;

/// `A = U · diag(singular_values) · V†`, singular values descending.
/// `u` is `rows x k`, `v` is `cols x k` with `k = min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() < a.cols() {
        // A† = V Σ U†
        let t = svd_tall(&a.dagger());
        return Svd { u: t.v, singular_values: t.singular_values, v: t.u };
    }
    svd_tall(a)
}

fn svd_tall(a: &ComplexMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    // column-major working storage
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.column(c)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= ORTHO_TOL * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotate q by the phase of gamma so the overlap becomes real,
                // then apply a real Jacobi rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut vcols, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> =
        cols.iter().enumerate().map(|(k, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), k)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (out_k, &(sigma, k)) in order.iter().enumerate() {
        singular_values.push(sigma);
        if sigma > 0.0 {
            let col: Vec<C64> = cols[k].iter().map(|z| z / sigma).collect();
            u.set_column(out_k, &col);
        }
        v.set_column(out_k, &vcols[k]);
    }
    Svd { u, singular_values, v }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    let phase_conj = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase_conj;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd) -> ComplexMatrix {
        let k = s.singular_values.len();
        let mut sig = ComplexMatrix::zeros(k, k);
        for (i, &x) in s.singular_values.iter().enumerate() {
            sig[(i, i)] = C64::new(x, 0.0);
        }
        s.u.matmul(&sig).unwrap().matmul(&s.v.dagger()).unwrap()
    }

    fn sample_matrix(rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|k| {
                let x = k as f64;
                C64::new((1.3 * x).sin() + 0.2, (0.7 * x + 0.1).cos())
            })
            .collect();
        ComplexMatrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn reconstructs_tall_wide_and_square() {
        for &(r, c) in &[(4, 4), (8, 3), (3, 8), (1, 5), (16, 16)] {
            let a = sample_matrix(r, c);
            let s = svd(&a);
            let err = super::super::matrix::frobenius_distance(&reconstruct(&s), &a).unwrap();
            assert!(err < 1e-12, "{r}x{c}: {err}");
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let s = svd(&a);
        assert!((s.singular_values[0] - 5.0).abs() < 1e-13);
        assert!(s.singular_values[1].abs() < 1e-13);
    }
}
