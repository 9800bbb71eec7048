//! Periodic chain assembly H = Σ_l h_{l..l+k−1 mod n}.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::LocalHamiltonian;
use crate::numerics::CMatrix;
use crate::{Error, Result};

/// Largest chain realized as a dense matrix.
pub const MAX_DENSE_SITES: usize = 12;
/// Largest chain accepted by the matrix-free product.
pub const MAX_MATVEC_SITES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct ChainHamiltonian {
    pub n: usize,
    pub local: LocalHamiltonian,
    /// Nonzero entries of h grouped by local row.
    #[serde(skip)]
    by_row: Vec<Vec<(usize, C64)>>,
}

/// Periodic chain of n ≥ k sites.
pub fn assemble_chain(local: &LocalHamiltonian, n: usize) -> Result<ChainHamiltonian> {
    if n < local.k {
        return Err(Error::InvalidArgument(format!("chain of {n} sites shorter than the block size {}", local.k)));
    }
    if n > MAX_MATVEC_SITES {
        return Err(Error::InvalidArgument(format!("chain of {n} sites exceeds {MAX_MATVEC_SITES}")));
    }
    let dim = 1usize << local.k;
    let scale = local.dense.max_abs();
    let by_row = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (j, local.dense[(i, j)]))
                .filter(|(_, v)| v.norm() > 1e-300 && v.norm() > 1e-17 * scale)
                .collect()
        })
        .collect();
    Ok(ChainHamiltonian { n, local: local.clone(), by_row })
}

impl ChainHamiltonian {
    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Bit positions (from the least significant end) of the window
    /// starting at site l, listed from its first site on.
    fn window(&self, l: usize) -> Vec<usize> {
        (0..self.local.k).map(|s| self.n - 1 - (l + s) % self.n).collect()
    }

    fn local_index(x: usize, bits: &[usize]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | ((x >> b) & 1))
    }

    fn replace(x: usize, bits: &[usize], y: usize) -> usize {
        let k = bits.len();
        let mut out = x;
        for (s, &b) in bits.iter().enumerate() {
            let bit = (y >> (k - 1 - s)) & 1;
            out = (out & !(1 << b)) | (bit << b);
        }
        out
    }

    /// H·v without forming H. Rows are computed independently, so the result
    /// does not depend on the worker count.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!("vector of length {} for {} sites", v.len(), self.n)));
        }
        let windows: Vec<Vec<usize>> = (0..self.n).map(|l| self.window(l)).collect();
        Ok((0..self.dim())
            .into_par_iter()
            .map(|x| {
                let mut acc = C64::new(0.0, 0.0);
                for w in &windows {
                    let yi = Self::local_index(x, w);
                    for &(j, h) in &self.by_row[yi] {
                        acc += h * v[Self::replace(x, w, j)];
                    }
                }
                acc
            })
            .collect())
    }

    /// Dense matrix (n ≤ 12).
    pub fn dense(&self) -> Result<CMatrix> {
        if self.n > MAX_DENSE_SITES {
            return Err(Error::InvalidArgument(format!("dense chain limited to {MAX_DENSE_SITES} sites")));
        }
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for l in 0..self.n {
            let w = self.window(l);
            for x in 0..dim {
                let yi = Self::local_index(x, &w);
                for &(j, h) in &self.by_row[yi] {
                    m[(x, Self::replace(x, &w, j))] += h;
                }
            }
        }
        Ok(m)
    }

    /// ⟨ψ|H|ψ⟩/⟨ψ|ψ⟩.
    pub fn rayleigh(&self, psi: &[C64]) -> Result<f64> {
        let hv = self.apply(psi)?;
        let num: C64 = psi.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if den == 0.0 {
            return Err(Error::NullState("zero vector in Rayleigh quotient".into()));
        }
        Ok(num.re / den)
    }
}
