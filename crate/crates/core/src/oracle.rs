//! Brute-force reference computations used by the test suites.
//!
//! Nothing here is on a production path. Each routine recomputes a quantity
//! by a route that shares no code with the implementation it checks: dense
//! matrix exponentials instead of closed-form squeezing, exhaustive outcome
//! enumeration instead of geometric series.

use num_complex::Complex64;

use crate::fock::{FockError, FockState};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self.get(r, c).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

/// `exp(A)` by scaling and squaring with a degree-24 Taylor polynomial.
///
/// `A` is scaled by `2^-s` until its 1-norm is at most 1/2, where the
/// truncated Taylor remainder is far below double precision.
pub fn expm(a: &DenseMatrix) -> DenseMatrix {
    let norm = a.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = DenseMatrix::identity(a.dim);
    let mut term = DenseMatrix::identity(a.dim);
    for k in 1..=24 {
        term = term
            .matmul(&scaled)
            .scale(Complex64::new(1.0 / k as f64, 0.0));
        for (r, t) in result.data.iter_mut().zip(&term.data) {
            *r += t;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// `exp(A)` computed block by block over the connected components of the
/// sparsity graph of `A`. Identical to [`expm`] in exact arithmetic; lets the
/// oracle use working spaces whose dense exponential would be too slow.
pub fn expm_blockwise(a: &DenseMatrix) -> DenseMatrix {
    let n = a.dim;
    let mut component = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        component[start] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let i = members[cursor];
            cursor += 1;
            for (j, slot) in component.iter_mut().enumerate() {
                let linked = a.get(i, j).norm() > 0.0 || a.get(j, i).norm() > 0.0;
                if linked && *slot == usize::MAX {
                    *slot = id;
                    members.push(j);
                }
            }
        }
        blocks.push(members);
    }
    let mut out = DenseMatrix::zeros(n);
    for members in blocks {
        let mut sub = DenseMatrix::zeros(members.len());
        for (r, &i) in members.iter().enumerate() {
            for (c, &j) in members.iter().enumerate() {
                sub.set(r, c, a.get(i, j));
            }
        }
        let e = expm(&sub);
        for (r, &i) in members.iter().enumerate() {
            for (c, &j) in members.iter().enumerate() {
                out.set(i, j, e.get(r, c));
            }
        }
    }
    out
}

/// Dense `-i ε (a†b† + a b)` on two modes truncated at `cutoff`, basis index
/// `na * (cutoff + 1) + nb`.
pub fn spdc_generator(epsilon: f64, cutoff: usize) -> DenseMatrix {
    let base = cutoff + 1;
    let mut h = DenseMatrix::zeros(base * base);
    for na in 0..base {
        for nb in 0..base {
            let from = na * base + nb;
            if na < cutoff && nb < cutoff {
                let to = (na + 1) * base + nb + 1;
                let w = (((na + 1) * (nb + 1)) as f64).sqrt();
                h.set(to, from, Complex64::new(0.0, -epsilon * w));
            }
            if na > 0 && nb > 0 {
                let to = (na - 1) * base + nb - 1;
                let w = ((na * nb) as f64).sqrt();
                h.set(to, from, Complex64::new(0.0, -epsilon * w));
            }
        }
    }
    h
}

/// Two-mode squeezing by exponentiating the truncated generator on an enlarged
/// `working_cutoff`, then projecting back to the state's cutoff and
/// renormalizing. Only two-mode states are supported.
pub fn spdc_by_matrix_exponential(
    state: &FockState,
    epsilon: f64,
    working_cutoff: usize,
) -> Result<FockState, FockError> {
    assert_eq!(state.num_modes(), 2, "oracle handles two-mode states");
    let cutoff = state.cutoff();
    assert!(working_cutoff >= cutoff);
    let wbase = working_cutoff + 1;
    let mut embedded = vec![Complex64::new(0.0, 0.0); wbase * wbase];
    for na in 0..=cutoff {
        for nb in 0..=cutoff {
            embedded[na * wbase + nb] = state.amplitude(&[na, nb])?;
        }
    }
    let u = expm_blockwise(&spdc_generator(epsilon, working_cutoff));
    let evolved = u.apply(&embedded);
    let mut amps = Vec::with_capacity((cutoff + 1) * (cutoff + 1));
    for na in 0..=cutoff {
        for nb in 0..=cutoff {
            amps.push(evolved[na * wbase + nb]);
        }
    }
    let mut out = FockState::from_amplitudes(2, cutoff, amps)?;
    out.renormalize()?;
    Ok(out)
}

/// Exhaustive sequential-priority enumeration over every per-source pair
/// count tuple in `{0..probs.len()-1}^m`. The first source with a nonzero
/// count wins and its count is the array output.
///
/// Returns `(P(output = 1), P(output > 1))`.
pub fn enumerate_array_output(m: usize, probs: &[f64]) -> (f64, f64) {
    let k = probs.len();
    let total = k.pow(m as u32);
    let (mut one, mut many) = (0.0, 0.0);
    let mut counts = vec![0usize; m];
    for code in 0..total {
        let mut c = code;
        for slot in counts.iter_mut() {
            *slot = c % k;
            c /= k;
        }
        let p: f64 = counts.iter().map(|&n| probs[n]).product();
        match counts.iter().find(|&&n| n > 0) {
            Some(1) => one += p,
            Some(_) => many += p,
            None => {}
        }
    }
    (one, many)
}
