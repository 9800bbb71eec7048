//! Pauli-basis expansion of local Hamiltonians and affine comparison against
//! printed closed forms.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

use super::{LocalHamiltonian, OrbitBasis};
use crate::numerics::{svd, CMatrix};
use crate::{Error, Result};

const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Coefficients c_w = tr(h·P_w)/2^k, words written in site order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDecomposition {
    pub k: usize,
    pub terms: BTreeMap<String, f64>,
    /// Largest discarded imaginary part (zero for Hermitian input).
    pub max_imag: f64,
}

impl Serialize for PauliDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

fn pauli_phase(letter: usize, bit: usize) -> C64 {
    match (letter, bit) {
        (2, 0) => C64::new(0.0, 1.0),
        (2, _) => C64::new(0.0, -1.0),
        (3, 1) => C64::new(-1.0, 0.0),
        _ => C64::new(1.0, 0.0),
    }
}

/// tr(m·P_w) using that P_w|y⟩ = φ(y)|y ⊕ flips⟩.
fn trace_with_word(m: &CMatrix, word: &[usize]) -> C64 {
    let k = word.len();
    let flips = word.iter().fold(0usize, |acc, &l| (acc << 1) | usize::from(l == 1 || l == 2));
    let mut acc = C64::new(0.0, 0.0);
    for y in 0..(1usize << k) {
        let mut ph = C64::new(1.0, 0.0);
        for (s, &l) in word.iter().enumerate() {
            ph *= pauli_phase(l, (y >> (k - 1 - s)) & 1);
        }
        acc += ph * m[(y, y ^ flips)];
    }
    acc
}

pub(crate) fn decompose_dense(m: &CMatrix, k: usize) -> PauliDecomposition {
    let dim = 1usize << k;
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut terms = BTreeMap::new();
    let mut max_imag: f64 = 0.0;
    let mut word = vec![0usize; k];
    for code in 0..(1usize << (2 * k)) {
        for (s, w) in word.iter_mut().enumerate() {
            *w = (code >> (2 * (k - 1 - s))) & 3;
        }
        let c = trace_with_word(m, &word) / dim as f64;
        if c.norm() > 1e-13 * scale {
            max_imag = max_imag.max(c.im.abs());
            if c.re.abs() > 1e-13 * scale {
                terms.insert(word.iter().map(|&l| LETTERS[l]).collect(), c.re);
            }
        }
    }
    PauliDecomposition { k, terms, max_imag }
}

pub fn pauli_decomposition(local: &LocalHamiltonian) -> PauliDecomposition {
    decompose_dense(&local.dense, local.k)
}

impl PauliDecomposition {
    /// Σ_w c_w P_w as a dense matrix.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let dim = 1usize << self.k;
        let mut m = CMatrix::zeros(dim, dim);
        for (w, &c) in &self.terms {
            let letters: Vec<usize> = w
                .chars()
                .map(|ch| LETTERS.iter().position(|&l| l == ch))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidArgument(format!("bad Pauli word {w}")))?;
            if letters.len() != self.k {
                return Err(Error::Dimension(format!("word {w} for k={}", self.k)));
            }
            let flips = letters.iter().fold(0usize, |acc, &l| (acc << 1) | usize::from(l == 1 || l == 2));
            for y in 0..dim {
                let mut ph = C64::new(c, 0.0);
                for (s, &l) in letters.iter().enumerate() {
                    ph *= pauli_phase(l, (y >> (self.k - 1 - s)) & 1);
                }
                m[(y ^ flips, y)] += ph;
            }
        }
        Ok(m)
    }
}

/// Per-site content of the translation-invariant chain operator: each word
/// is trimmed of leading and trailing identities and equal patterns are
/// summed. The pure identity is reported as "I".
pub fn translation_patterns(d: &PauliDecomposition) -> BTreeMap<String, f64> {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for (w, &c) in &d.terms {
        let t = w.trim_matches('I');
        let key = if t.is_empty() { "I".to_string() } else { t.to_string() };
        *out.entry(key).or_insert(0.0) += c;
    }
    out.retain(|_, c| *c != 0.0);
    out
}

/// Closed forms printed for the parent Hamiltonians, as translation
/// patterns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum PrintedForm {
    /// Three-body form of Model A at g = 1 with couplings J, K.
    ModelA { theta: f64, j: f64, k: f64 },
    /// Nearest-neighbour XYZ form of Model B.
    ModelB { g: f64 },
    /// Three-body form of the q-deformed model equivalent to Model A.
    Cirac { q: f64 },
}

impl PrintedForm {
    pub fn name(&self) -> &'static str {
        match self {
            PrintedForm::ModelA { .. } => "HA",
            PrintedForm::ModelB { .. } => "HB",
            PrintedForm::Cirac { .. } => "ciracH",
        }
    }

    pub fn patterns(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match *self {
            PrintedForm::ModelA { theta, j, k } => {
                let u = (1.0 + theta.cos()) / 2.0;
                m.insert("ZZ".into(), j * (u * u - 1.0) / 2.0);
                m.insert("ZIZ".into(), j * (u * u + 1.0) / 2.0 - k / 2.0);
                m.insert("XIX".into(), -u * j);
                m.insert("YIY".into(), u * j);
                m.insert("X".into(), -k / 2.0);
                m.insert("ZXZ".into(), k / 2.0);
            }
            PrintedForm::ModelB { g } => {
                m.insert("XX".into(), 1.0 - g * g);
                m.insert("YY".into(), -(1.0 - g * g));
                m.insert("ZZ".into(), (1.0 + 2.0 * g * g) / 2.0);
                m.insert("X".into(), 1.0);
            }
            PrintedForm::Cirac { q } => {
                m.insert("ZZ".into(), 2.0 * (q * q - 1.0));
                m.insert("X".into(), -(1.0 + q) * (1.0 + q));
                m.insert("ZXZ".into(), (q - 1.0) * (q - 1.0));
            }
        }
        m.retain(|_, c| *c != 0.0);
        m
    }
}

/// Best fit of a printed form by Σ_g w_g·(group g operator) + shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub form: String,
    pub printed: BTreeMap<String, f64>,
    /// Fitted constructed patterns (identity excluded).
    pub constructed: BTreeMap<String, f64>,
    pub weights: Vec<f64>,
    pub shift: f64,
    /// ‖fit − printed‖/‖printed‖ over non-identity patterns.
    pub residual: f64,
    pub mismatch: bool,
    /// All fitted weights positive, so the fit is itself a parent Hamiltonian.
    pub weights_positive: bool,
    /// Printed patterns the constructed operators cannot produce.
    pub missing: Vec<String>,
    /// Patterns present in the fit but absent from the printed form.
    pub extra: Vec<String>,
}

/// Residual above which a comparison is flagged.
pub const FIT_TOL: f64 = 1e-8;

/// Least-squares fit of `form` over the per-group operators of `orbits`
/// (one free weight per group) and a free identity shift.
pub fn compare_with_printed(orbits: &OrbitBasis, form: &PrintedForm) -> Result<ComparisonReport> {
    let mut group_patterns = Vec::new();
    for g in &orbits.groups {
        let mut w = vec![0.0; orbits.groups.len()];
        w[group_patterns.len()] = 1.0;
        let h = super::local_hamiltonian(orbits, &w).or_else(|_| {
            // Zero weights are rejected by the constructor; build the single group directly.
            let terms = g
                .iter()
                .map(|v| super::ProjectorTerm { ket: v.iter().map(|z| z.conj()).collect(), weight: 1.0 })
                .collect();
            LocalHamiltonian::from_terms(orbits.k, terms)
        })?;
        group_patterns.push(translation_patterns(&pauli_decomposition(&h)));
    }
    let printed = form.patterns();
    let mut words: Vec<String> = printed.keys().filter(|w| *w != "I").cloned().collect();
    for gp in &group_patterns {
        for w in gp.keys() {
            if w != "I" && !words.contains(w) {
                words.push(w.clone());
            }
        }
    }
    words.sort();
    let ng = group_patterns.len();
    let a = CMatrix::from_fn(words.len(), ng, |i, j| C64::new(*group_patterns[j].get(&words[i]).unwrap_or(&0.0), 0.0));
    let b: Vec<f64> = words.iter().map(|w| *printed.get(w).unwrap_or(&0.0)).collect();
    let weights = least_squares(&a, &b);
    let mut constructed = BTreeMap::new();
    let mut r2 = 0.0;
    for (i, w) in words.iter().enumerate() {
        let v: f64 = (0..ng).map(|j| a[(i, j)].re * weights[j]).sum();
        if v.abs() > 1e-12 {
            constructed.insert(w.clone(), v);
        }
        r2 += (v - b[i]).powi(2);
    }
    let pn = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let residual = if pn > 0.0 { r2.sqrt() / pn } else { r2.sqrt() };
    let fitted_identity: f64 = group_patterns.iter().zip(&weights).map(|(gp, w)| gp.get("I").unwrap_or(&0.0) * w).sum();
    let shift = printed.get("I").unwrap_or(&0.0) - fitted_identity;
    let producible: Vec<&String> = group_patterns.iter().flat_map(|gp| gp.keys()).collect();
    let missing = printed.keys().filter(|w| *w != "I" && !producible.contains(w)).cloned().collect();
    let extra = constructed.keys().filter(|w| !printed.contains_key(*w)).cloned().collect();
    Ok(ComparisonReport {
        form: form.name().to_string(),
        printed,
        constructed,
        weights_positive: weights.iter().all(|&w| w > 0.0),
        weights,
        shift,
        residual,
        mismatch: residual > FIT_TOL,
        missing,
        extra,
    })
}

/// Minimum-norm least-squares solution of a·x = b (real parts).
fn least_squares(a: &CMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.cols();
    if a.rows() == 0 || n == 0 {
        return vec![0.0; n];
    }
    let s = svd(a);
    let smax = s.sigma[0];
    let mut x = vec![0.0; n];
    for j in 0..n {
        let sj = s.sigma[j];
        if sj <= 1e-12 * smax || sj == 0.0 {
            continue;
        }
        let ub: C64 = (0..a.rows()).map(|i| s.u[(i, j)].conj() * b[i]).sum();
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += (s.v[(i, j)] * ub / sj).re;
        }
    }
    x
}
