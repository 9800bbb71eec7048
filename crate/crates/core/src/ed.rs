//! Brute-force checks on dense state vectors.
//!
//! Index convention: configuration (i₁, …, i_n) has index Σ i_s·2^{n−s}, so
//! site 1 is the most significant bit. Complement flips every bit; reversal
//! maps site s to site n+1−s.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::mps::{block_products, MatrixPair};
use crate::numerics::{eigh, eigvalsh};
use crate::parent_ham::{ChainHamiltonian, MAX_DENSE_SITES};
use crate::{Error, Result};

/// Largest chain expanded to a dense state.
pub const MAX_STATE_SITES: usize = 14;
/// Relative tolerance (against ‖H‖) defining the ground and zero-energy spaces.
pub const GROUND_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseState {
    pub n: usize,
    pub amplitudes: Vec<C64>,
}

impl DenseState {
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n {
            return Err(Error::Dimension(format!("{} amplitudes for {n} sites", amplitudes.len())));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes".into()));
        }
        Ok(DenseState { n, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_null(&self) -> bool {
        self.amplitudes.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    /// Little-endian (re, im) f64 pairs in index order.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.amplitudes.len() * 16);
        for z in &self.amplitudes {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_le_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 16usize << n {
            return Err(Error::Dimension(format!("{} bytes for {n} sites", bytes.len())));
        }
        let amps = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                C64::new(re, im)
            })
            .collect();
        DenseState::new(n, amps)
    }

    fn permuted(&self, f: impl Fn(usize) -> usize) -> Vec<C64> {
        (0..self.amplitudes.len()).map(|x| self.amplitudes[f(x)]).collect()
    }

    /// ψ'(config) = ψ(complement(config)).
    pub fn spin_flipped(&self) -> Vec<C64> {
        let mask = (1usize << self.n) - 1;
        self.permuted(|x| !x & mask)
    }

    /// ψ'(i₁…i_n) = ψ(i_n…i₁).
    pub fn reversed(&self) -> Vec<C64> {
        let n = self.n;
        self.permuted(|x| (0..n).fold(0, |y, s| y | (((x >> s) & 1) << (n - 1 - s))))
    }
}

/// Unnormalized amplitudes tr(A_{i₁}···A_{i_n}).
pub fn mps_to_dense(pair: &MatrixPair, n: usize) -> Result<DenseState> {
    if n == 0 || n > MAX_STATE_SITES {
        return Err(Error::InvalidArgument(format!("dense state needs 1 <= n <= {MAX_STATE_SITES}, got {n}")));
    }
    let amps: Vec<C64> = block_products(pair, n).iter().map(|p| p[0] + p[3]).collect();
    let st = DenseState::new(n, amps)?;
    if st.is_null() {
        return Err(Error::NullState(format!("all amplitudes vanish at n={n}")));
    }
    Ok(st)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    /// Full diagonalization was performed (otherwise Rayleigh quotients only).
    pub full: bool,
    /// Lowest eigenvalues, ascending.
    pub lowest: Vec<f64>,
    pub lambda_min: Option<f64>,
    /// max |λ| when diagonalized, otherwise a power-iteration estimate.
    pub h_norm: f64,
    pub ground_dim: Option<usize>,
    pub rayleigh: Vec<f64>,
    /// ‖P_ground ψ‖²/‖ψ‖² per supplied state.
    pub overlaps: Vec<Option<f64>>,
}

fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration for ‖H‖ (Hermitian H), from a fixed start vector.
fn norm_estimate(chain: &ChainHamiltonian, iters: usize) -> Result<f64> {
    let dim = chain.dim();
    let mut v: Vec<C64> = (0..dim).map(|i| C64::new(1.0 + (i % 7) as f64 * 0.1, 0.0)).collect();
    let mut est = 0.0;
    for _ in 0..iters {
        let nv = vnorm(&v);
        v.iter_mut().for_each(|z| *z /= nv);
        let w = chain.apply(&v)?;
        est = vnorm(&w);
        if est == 0.0 {
            return Ok(0.0);
        }
        v = w;
    }
    Ok(est)
}

/// Ground-state report. Full diagonalization for n ≤ 12; for 12 < n ≤ 14 only
/// Rayleigh quotients and a power-iteration norm estimate are returned.
pub fn ground_check(chain: &ChainHamiltonian, states: &[DenseState], lowest_count: usize) -> Result<SpectrumReport> {
    let n = chain.n;
    for s in states {
        if s.n != n {
            return Err(Error::Dimension(format!("state of {} sites for a chain of {n}", s.n)));
        }
        if s.is_null() {
            return Err(Error::NullState("supplied state is zero".into()));
        }
    }
    let rayleigh = states.iter().map(|s| chain.rayleigh(&s.amplitudes)).collect::<Result<Vec<_>>>()?;
    if n > MAX_DENSE_SITES {
        if n > MAX_STATE_SITES {
            return Err(Error::InvalidArgument(format!("ground check limited to {MAX_STATE_SITES} sites")));
        }
        return Ok(SpectrumReport {
            n,
            full: false,
            lowest: vec![],
            lambda_min: None,
            h_norm: norm_estimate(chain, 200)?,
            ground_dim: None,
            rayleigh,
            overlaps: vec![None; states.len()],
        });
    }
    let h = chain.dense()?;
    let need_vectors = !states.is_empty();
    let (vals, vecs) = if need_vectors { eigh(&h).map(|(v, u)| (v, Some(u)))? } else { (eigvalsh(&h)?, None) };
    let h_norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lambda_min = vals[0];
    let ground_dim = vals.iter().take_while(|&&v| v - lambda_min <= GROUND_TOL * h_norm.max(f64::MIN_POSITIVE)).count();
    let overlaps = match &vecs {
        Some(u) => states
            .iter()
            .map(|s| {
                let nn = vnorm(&s.amplitudes).powi(2);
                let p: f64 = (0..ground_dim).map(|j| vdot(&u.col(j), &s.amplitudes).norm_sqr()).sum();
                Some(p / nn)
            })
            .collect(),
        None => vec![],
    };
    Ok(SpectrumReport {
        n,
        full: true,
        lowest: vals.iter().take(lowest_count).copied().collect(),
        lambda_min: Some(lambda_min),
        h_norm,
        ground_dim: Some(ground_dim),
        rayleigh,
        overlaps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetryResiduals {
    pub spin_flip: f64,
    pub reversal: f64,
}

/// min over unit φ of ‖Gψ − φψ‖/‖ψ‖; the optimum is φ = ⟨ψ|Gψ⟩/|⟨ψ|Gψ⟩|.
fn phase_residual(psi: &[C64], g: &[C64]) -> f64 {
    let n = vnorm(psi);
    if n == 0.0 {
        return 0.0;
    }
    let ip = vdot(psi, g);
    let phi = if ip.norm() == 0.0 { C64::new(1.0, 0.0) } else { ip / ip.norm() };
    let r: Vec<C64> = g.iter().zip(psi).map(|(a, b)| a - phi * b).collect();
    vnorm(&r) / n
}

pub fn state_symmetry_check(state: &DenseState) -> SymmetryResiduals {
    SymmetryResiduals {
        spin_flip: phase_residual(&state.amplitudes, &state.spin_flipped()),
        reversal: phase_residual(&state.amplitudes, &state.reversed()),
    }
}

/// Dimension of the eigenspace with |λ| ≤ 1e-9·‖H‖ (n ≤ 12).
pub fn degeneracy_count(chain: &ChainHamiltonian) -> Result<usize> {
    let vals = eigvalsh(&chain.dense()?)?;
    let h_norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(vals.iter().filter(|v| v.abs() <= GROUND_TOL * h_norm).count())
}

/// Numerical rank of a set of states (relative singular-value tolerance).
pub fn state_rank(states: &[DenseState], tol: f64) -> usize {
    if states.is_empty() {
        return 0;
    }
    let m = crate::numerics::CMatrix::from_fn(states[0].amplitudes.len(), states.len(), |i, j| {
        states[j].amplitudes[i] / states[j].norm()
    });
    let s = crate::numerics::singular_values(&m);
    s.iter().filter(|&&x| x > tol * s[0]).count()
}
