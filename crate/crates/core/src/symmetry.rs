//! Spin-flip and parity witnesses.
//!
//! Convention: a spin-flip witness satisfies W A_i W⁻¹ = ε A_{1−i}, a parity
//! witness Ω A_i Ω⁻¹ = σ A_iᵀ. A matrix satisfying X⁻¹ A_i X = ε A_{1−i}
//! instead is the inverse of a witness in this convention.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::mps::MatrixPair;
use crate::numerics::{null_space, CMatrix};
use crate::{Error, Result};

/// Invertibility margin |det W| / ‖W‖_F² below which a candidate is rejected.
const INVERTIBLE_MARGIN: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpinFlipWitness {
    pub x: CMatrix,
    pub epsilon: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityWitness {
    pub omega: CMatrix,
    pub sigma: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    SpinFlip(SpinFlipWitness),
    Parity(ParityWitness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    /// ε with tr A₀ = ε tr A₁, preferring +1 when both signs hold.
    pub trace_sign: Option<i8>,
    pub det_ok: bool,
}

/// Checks the necessary conditions tr A₀ = ε tr A₁ and det A₀ = det A₁
/// (relative tolerance 1e-9 against the pair scale).
pub fn invariant_check(pair: &MatrixPair) -> InvariantReport {
    let s = pair.scale();
    let (t0, t1) = (pair.a0().trace(), pair.a1().trace());
    let tol = 1e-9 * s;
    let trace_sign = if (t0 - t1).norm() <= tol {
        Some(1)
    } else if (t0 + t1).norm() <= tol {
        Some(-1)
    } else {
        None
    };
    let det_ok = (pair.a0().det2() - pair.a1().det2()).norm() <= 1e-9 * s * s;
    InvariantReport { trace_sign, det_ok }
}

/// Coefficient matrix of the linear map X ↦ X·a − b·X on row-major 2×2 X.
fn sylvester_rows(a: &CMatrix, b: &CMatrix) -> Vec<[C64; 4]> {
    let mut rows = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let mut row = [C64::new(0.0, 0.0); 4];
            for p in 0..2 {
                for q in 0..2 {
                    let mut c = C64::new(0.0, 0.0);
                    if p == i {
                        c += a[(q, j)];
                    }
                    if q == j {
                        c -= b[(i, p)];
                    }
                    row[2 * p + q] = c;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Null space of the stacked systems X·a_k − b_k·X = 0.
pub(crate) fn intertwiner_space(eqs: &[(&CMatrix, &CMatrix)], tol: f64) -> Vec<CMatrix> {
    let rows: Vec<[C64; 4]> = eqs.iter().flat_map(|(a, b)| sylvester_rows(a, b)).collect();
    let m = CMatrix::from_fn(rows.len(), 4, |i, j| rows[i][j]);
    null_space(&m, tol).into_iter().map(|v| CMatrix::from_vec4(&v)).collect()
}

fn margin(x: &CMatrix) -> f64 {
    let n2 = x.norm_fro().powi(2);
    if n2 == 0.0 {
        0.0
    } else {
        x.det2().norm() / n2
    }
}

/// Picks the candidate in span(basis) with the largest invertibility margin,
/// searching the basis vectors, pairwise combinations and a few fixed mixes.
pub(crate) fn most_invertible(basis: &[CMatrix]) -> Option<CMatrix> {
    let mut cands: Vec<CMatrix> = basis.to_vec();
    let phases = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for ph in phases {
                cands.push(&basis[i] + &basis[j].scale(ph));
            }
        }
    }
    if basis.len() > 2 {
        let weights = [1.0, 0.618_033_988_7, 0.381_966_011_3, 0.236_067_977_5];
        let mut mix = CMatrix::zeros(2, 2);
        let mut alt = CMatrix::zeros(2, 2);
        for (k, b) in basis.iter().enumerate() {
            mix = &mix + &b.scale_re(weights[k % 4]);
            alt = &alt + &b.scale(C64::from_polar(1.0, 0.7 * k as f64));
        }
        cands.push(mix);
        cands.push(alt);
    }
    let mut best: Option<(f64, CMatrix)> = None;
    for c in cands {
        let m = margin(&c);
        if best.as_ref().is_none_or(|(bm, _)| m > *bm + 1e-12) {
            best = Some((m, c));
        }
    }
    match best {
        Some((m, c)) if m > INVERTIBLE_MARGIN => Some(normalize_witness(&c)),
        _ => None,
    }
}

/// Unit Frobenius norm, leading nonzero entry (row-major) real positive.
pub fn normalize_witness(x: &CMatrix) -> CMatrix {
    let n = x.norm_fro();
    let y = x.scale_re(1.0 / n);
    let lead = y.as_slice().iter().copied().find(|z| z.norm() > 1e-12).unwrap_or(C64::new(1.0, 0.0));
    let ph = (lead / lead.norm()).conj();
    let mut out = y.scale(ph);
    // Strip rounding noise so real witnesses print as real.
    for z in out.as_mut_slice() {
        if z.im.abs() <= 1e-15 {
            z.im = 0.0;
        }
        if z.re.abs() <= 1e-15 {
            z.re = 0.0;
        }
    }
    out
}

/// Solves X A₀ − ε A₁ X = 0, X A₁ − ε A₀ X = 0 for ε = +1 then −1 and
/// returns the first invertible solution.
pub fn find_spin_flip_witness(pair: &MatrixPair) -> Option<SpinFlipWitness> {
    for eps in [1i8, -1] {
        let b0 = pair.a1().scale_re(eps as f64);
        let b1 = pair.a0().scale_re(eps as f64);
        let basis = intertwiner_space(&[(pair.a0(), &b0), (pair.a1(), &b1)], 1e-10);
        if let Some(x) = most_invertible(&basis) {
            return Some(SpinFlipWitness { x, epsilon: eps });
        }
    }
    None
}

/// Solves Ω A_i − σ A_iᵀ Ω = 0 for σ = +1 then −1.
pub fn find_parity_witness(pair: &MatrixPair) -> Option<ParityWitness> {
    for sigma in [1i8, -1] {
        let b0 = pair.a0().transpose().scale_re(sigma as f64);
        let b1 = pair.a1().transpose().scale_re(sigma as f64);
        let basis = intertwiner_space(&[(pair.a0(), &b0), (pair.a1(), &b1)], 1e-10);
        if let Some(omega) = most_invertible(&basis) {
            return Some(ParityWitness { omega, sigma });
        }
    }
    None
}

/// Largest residual of the defining equations, ‖W A W⁻¹ − rhs‖_F / max(1, ‖A‖).
pub fn verify_witness(pair: &MatrixPair, witness: &Witness) -> Result<f64> {
    let (w, targets): (&CMatrix, [CMatrix; 2]) = match witness {
        Witness::SpinFlip(s) => (
            &s.x,
            [pair.a1().scale_re(s.epsilon as f64), pair.a0().scale_re(s.epsilon as f64)],
        ),
        Witness::Parity(p) => (
            &p.omega,
            [pair.a0().transpose().scale_re(p.sigma as f64), pair.a1().transpose().scale_re(p.sigma as f64)],
        ),
    };
    if w.rows() != 2 || w.cols() != 2 {
        return Err(Error::Dimension("witness must be 2x2".into()));
    }
    if !(margin(w) > 1e-12) {
        return Err(Error::Singular("witness".into()));
    }
    let wi = w.inverse()?;
    let denom = pair.scale().max(1.0);
    let r0 = (&(w * pair.a0()) * &wi).dist(&targets[0]);
    let r1 = (&(w * pair.a1()) * &wi).dist(&targets[1]);
    Ok(r0.max(r1) / denom)
}

/// True when `a` and `b` agree up to a nonzero complex factor (relative
/// Frobenius residual below `tol`).
pub fn proportional(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let nb = b.norm_fro();
    let na = a.norm_fro();
    if na == 0.0 || nb == 0.0 {
        return na == nb;
    }
    let ip: C64 = b.as_slice().iter().zip(a.as_slice()).map(|(x, y)| x.conj() * y).sum();
    let f = ip / (nb * nb);
    a.dist(&b.scale(f)) <= tol * na
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn model_a(g: f64, theta: f64) -> MatrixPair {
        MatrixPair::real(
            [1.0 + g, 0.0, 0.0, 1.0 - g],
            [1.0 + g * theta.cos(), g * theta.sin(), g * theta.sin(), 1.0 - g * theta.cos()],
        )
        .unwrap()
    }

    #[test]
    fn invariants() {
        let r = invariant_check(&model_a(0.3, 1.1));
        assert_eq!(r, InvariantReport { trace_sign: Some(1), det_ok: true });
        let r = invariant_check(&MatrixPair::real([1.0, 0.0, 0.0, 2.0], [3.0, 0.0, 0.0, 4.0]).unwrap());
        assert_eq!(r, InvariantReport { trace_sign: None, det_ok: false });
        let cirac = MatrixPair::real([0.0, 0.0, 1.0, 1.0], [1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(invariant_check(&cirac), InvariantReport { trace_sign: Some(1), det_ok: true });
    }

    #[test]
    fn model_a_witnesses() {
        let theta = 1.2;
        let p = model_a(0.7, theta);
        let w = find_spin_flip_witness(&p).unwrap();
        assert_eq!(w.epsilon, 1);
        let expect = CMatrix::real2(theta.sin(), 1.0 - theta.cos(), 1.0 - theta.cos(), -theta.sin());
        assert!(proportional(&w.x, &expect, 1e-10));
        assert!(verify_witness(&p, &Witness::SpinFlip(w)).unwrap() < 1e-12);
        let om = find_parity_witness(&p).unwrap();
        assert!(proportional(&om.omega, &CMatrix::identity(2), 1e-10));
        assert_eq!(om.sigma, 1);
    }

    #[test]
    fn no_witness_for_unrelated_pair() {
        let p = MatrixPair::real([1.0, 0.0, 0.0, 2.0], [3.0, 0.0, 0.0, 4.0]).unwrap();
        assert!(find_spin_flip_witness(&p).is_none());
    }

    #[test]
    fn normalization_convention() {
        let x = normalize_witness(&CMatrix::from_vec(2, 2, vec![
            C64::new(0.0, 0.0), C64::new(0.0, 2.0), C64::new(0.0, 2.0), C64::new(0.0, 0.0),
        ]).unwrap());
        assert!((x[(0, 1)] - C64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((x.norm_fro() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_witness_rejected() {
        let p = model_a(0.5, PI / 3.0);
        let w = Witness::Parity(ParityWitness { omega: CMatrix::real2(1.0, 1.0, 1.0, 1.0), sigma: 1 });
        assert!(matches!(verify_witness(&p, &w), Err(Error::Singular(_))));
    }
}
