//! Diagonal observables: weighted sums of Z strings evaluated on measured
//! bitstrings (bit `q` of the mask is qubit `q`).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    /// `(coefficient, qubit mask)` pairs; the value is
    /// `Σ c (−1)^{popcount(bits & mask)}`.
    pub terms: Vec<(f64, u64)>,
}

fn mask_of(qubits: &[usize], num_qubits: usize) -> Result<u64> {
    let mut m = 0u64;
    for &q in qubits {
        if q >= num_qubits || q >= 64 {
            return Err(Error::InvalidArgument(format!("qubit {q} out of range")));
        }
        m ^= 1 << q;
    }
    Ok(m)
}

fn parse_index(tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse(format!("expected a qubit index, got '{tok}'")))
}

impl Observable {
    pub fn parity(num_qubits: usize) -> Self {
        Self { terms: vec![(1.0, if num_qubits >= 64 { u64::MAX } else { (1u64 << num_qubits) - 1 })] }
    }

    pub fn z_string(qubits: &[usize], num_qubits: usize) -> Result<Self> {
        Ok(Self { terms: vec![(1.0, mask_of(qubits, num_qubits)?)] })
    }

    /// Accepts `parity`, `z i`, `zz i j`, or a sum such as
    /// `0.5 z0 z1 + -0.25 z3`. Coefficients must satisfy `Σ|c| ≤ 1` so the
    /// value stays in `[−1, 1]`.
    pub fn parse(spec: &str, num_qubits: usize) -> Result<Self> {
        let toks: Vec<&str> = spec.split_whitespace().collect();
        match toks.as_slice() {
            ["parity"] => return Ok(Self::parity(num_qubits)),
            ["z", i] => return Self::z_string(&[parse_index(i)?], num_qubits),
            ["zz", i, j] => return Self::z_string(&[parse_index(i)?, parse_index(j)?], num_qubits),
            _ => {}
        }
        let mut terms = Vec::new();
        for part in spec.split('+') {
            let mut it = part.split_whitespace();
            let coef_tok = it.next().ok_or_else(|| Error::Parse(format!("empty term in '{spec}'")))?;
            let coef: f64 = coef_tok.parse().map_err(|_| Error::Parse(format!("bad coefficient '{coef_tok}'")))?;
            let mut qubits = Vec::new();
            for tok in it {
                let idx = tok
                    .strip_prefix('z')
                    .or_else(|| tok.strip_prefix('Z'))
                    .ok_or_else(|| Error::Parse(format!("expected z<index>, got '{tok}'")))?;
                qubits.push(parse_index(idx)?);
            }
            terms.push((coef, mask_of(&qubits, num_qubits)?));
        }
        let total: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
        if !total.is_finite() || total > 1.0 + 1e-12 {
            return Err(Error::ValueOutOfRange(total));
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, bits: u64) -> f64 {
        self.terms.iter().map(|&(c, m)| if (bits & m).count_ones().is_multiple_of(2) { c } else { -c }).sum()
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, m)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for q in 0..64 {
                if (m >> q) & 1 == 1 {
                    write!(f, " z{q}")?;
                }
            }
        }
        Ok(())
    }
}
