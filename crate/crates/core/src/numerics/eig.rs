//! General complex eigensolver: Householder reduction to Hessenberg form,
//! single-shift QR iteration to Schur form, eigenvectors by back
//! substitution.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use super::svd::{condition_number, svd};
use crate::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Condition number of the eigenvector matrix above which the input is
/// treated as defective.
pub const DEFECTIVE_COND: f64 = 1e8;
/// Eigenvector condition above which near-coincident eigenvalues are tested
/// for a common Jordan structure.
const MERGE_COND: f64 = 1e4;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Sorted by [`spectral_order`].
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors as columns.
    pub right_vectors: CMatrix,
    /// Left eigenvectors as columns, ⟨l_i| = l_iᴴ, bi-orthonormal to the right
    /// vectors when the input is not defective.
    pub left_vectors: CMatrix,
    pub is_defective: bool,
}

/// Total preorder used everywhere eigenvalues are sorted: modulus descending,
/// then real part descending, then imaginary part descending. Values closer
/// than a relative 1e-12 count as ties at each stage.
pub fn spectral_order(a: &C64, b: &C64) -> Ordering {
    let close = |x: f64, y: f64, s: f64| (x - y).abs() <= 1e-12 * s.max(1e-300);
    let scale = a.norm().max(b.norm());
    if !close(a.norm(), b.norm(), scale) {
        return b.norm().total_cmp(&a.norm());
    }
    if !close(a.re, b.re, scale) {
        return b.re.total_cmp(&a.re);
    }
    if !close(a.im, b.im, scale) {
        return b.im.total_cmp(&a.im);
    }
    Ordering::Equal
}

/// Permutation sorting `vals` by [`spectral_order`]. Insertion sort keeps it
/// stable and tolerant of the comparison's tie band.
pub fn spectral_permutation(vals: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && spectral_order(&vals[idx[j]], &vals[idx[j - 1]]) == Ordering::Less {
            idx.swap(j, j - 1);
            j -= 1;
        }
    }
    idx
}

pub fn sort_spectral(vals: &mut Vec<C64>) {
    let p = spectral_permutation(vals);
    *vals = p.iter().map(|&i| vals[i]).collect();
}

/// Reduce `a` (n×n row-major) to upper Hessenberg form in place and
/// accumulate the unitary similarity in `z`.
fn hessenberg(n: usize, a: &mut [C64], z: &mut [C64]) {
    for k in 0..n.saturating_sub(2) {
        let alpha = a[(k + 1) * n + k];
        let xnorm2: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if xnorm2 == 0.0 && alpha.im == 0.0 {
            continue;
        }
        let anorm = (alpha.norm_sqr() + xnorm2).sqrt();
        let beta = if alpha.re >= 0.0 { -anorm } else { anorm };
        let tau = (C64::new(beta, 0.0) - alpha) / beta;
        let inv = ONE / (alpha - beta);
        let mut v = vec![ONE; n - k - 1];
        for (t, i) in (k + 2..n).enumerate() {
            v[t + 1] = a[i * n + k] * inv;
        }
        let off = k + 1;
        // Left: A ← (I - conj(tau) v vᴴ) A on rows off..n.
        for j in k..n {
            let s: C64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(off + t) * n + j]).sum();
            let f = tau.conj() * s;
            for (t, vi) in v.iter().enumerate() {
                a[(off + t) * n + j] -= f * vi;
            }
        }
        // Right: A ← A (I - tau v vᴴ) on columns off..n.
        for i in 0..n {
            let row = &mut a[i * n + off..i * n + n];
            let s: C64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            let f = tau * s;
            for (x, vi) in row.iter_mut().zip(&v) {
                *x -= f * vi.conj();
            }
        }
        for i in 0..n {
            let row = &mut z[i * n + off..i * n + n];
            let s: C64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            let f = tau * s;
            for (x, vi) in row.iter_mut().zip(&v) {
                *x -= f * vi.conj();
            }
        }
        a[(k + 1) * n + k] = C64::new(beta, 0.0);
        for i in k + 2..n {
            a[i * n + k] = ZERO;
        }
    }
}

/// Givens rotation [c, s; -conj(s), c] (c real) with
/// [c, s; -conj(s), c]·[f; g] = [r; 0].
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        return (0.0, (g / g.norm()).conj());
    }
    let fn_ = f.norm();
    let r = fn_.hypot(g.norm());
    let c = fn_ / r;
    let s = (f / fn_) * g.conj() / r;
    (c, s)
}

/// Single-shift QR iteration on an upper Hessenberg matrix, producing the
/// complex Schur form in place and accumulating transformations in `z`.
fn schur(n: usize, h: &mut [C64], z: &mut [C64]) -> Result<()> {
    let eps = f64::EPSILON;
    let hnorm = h.iter().map(|x| x.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut ihi = n as isize - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(n);
    while ihi > 0 {
        let hi = ihi as usize;
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1) * n + l - 1].norm() + h[l * n + l].norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h[l * n + l - 1].norm() <= eps * s {
                h[l * n + l - 1] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            ihi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n.max(10) {
            return Err(Error::NoConvergence("complex Schur QR".into()));
        }
        let shift = if iter % 11 == 10 {
            // Exceptional shift to break cycles.
            h[hi * n + hi] + C64::new(0.75 * h[hi * n + hi - 1].norm(), 0.0)
        } else {
            let a = h[(hi - 1) * n + hi - 1];
            let b = h[(hi - 1) * n + hi];
            let c = h[hi * n + hi - 1];
            let d = h[hi * n + hi];
            let tr = a + d;
            let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
            let l1 = tr * 0.5 + disc;
            let l2 = tr * 0.5 - disc;
            if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 }
        };
        for i in l..=hi {
            h[i * n + i] -= shift;
        }
        rots.clear();
        for k in l..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            rots.push((c, s));
            for j in k..n {
                let x = h[k * n + j];
                let y = h[(k + 1) * n + j];
                h[k * n + j] = x * c + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + y * c;
            }
            h[(k + 1) * n + k] = ZERO;
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let k = l + t;
            let top = (k + 2).min(hi + 1);
            for i in 0..top {
                let x = h[i * n + k];
                let y = h[i * n + k + 1];
                h[i * n + k] = x * c + y * s.conj();
                h[i * n + k + 1] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[i * n + k];
                let y = z[i * n + k + 1];
                z[i * n + k] = x * c + y * s.conj();
                z[i * n + k + 1] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[i * n + i] += shift;
        }
    }
    Ok(())
}

/// Eigenvalues only, sorted by [`spectral_order`].
pub fn eigvals(m: &CMatrix) -> Result<Vec<C64>> {
    Ok(eig(m)?.eigenvalues)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("eigen-decomposition needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if m.rows() > 4096 {
        return Err(Error::Dimension(format!("dimension {} exceeds 4096", m.rows())));
    }
    Ok(())
}

fn normalize(v: &mut [C64]) {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
}

/// Smallest right singular vector of `m - lambda·I`.
fn kernel_vector(m: &CMatrix, lambda: C64) -> Vec<C64> {
    let n = m.rows();
    let mut s = m.clone();
    for i in 0..n {
        s[(i, i)] -= lambda;
    }
    let d = svd(&s);
    d.v.col(n - 1)
}

/// Group eigenvalues of a defective matrix into clusters that form a single
/// Jordan structure and replace each cluster by its mean. Eigenvalues of a
/// Jordan block of size m are perturbed by O(ε^{1/m}) in floating point; the
/// mean is accurate to O(ε). A cluster is accepted only when
/// (M - μI)^size has `size` negligible singular values.
fn merge_defective_clusters(m: &CMatrix, vals: &mut [C64]) {
    let n = vals.len();
    if n > 64 {
        return;
    }
    let scale = m.norm_fro().max(1.0);
    let link = 1e-4 * scale;
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        // Single-linkage cluster around i.
        let mut members = vec![i];
        assigned[i] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..n {
                if assigned[j] {
                    continue;
                }
                if members.iter().any(|&k| (vals[k] - vals[j]).norm() <= link) {
                    members.push(j);
                    assigned[j] = true;
                    grew = true;
                }
            }
        }
        let size = members.len();
        if size < 2 {
            continue;
        }
        let mean: C64 = members.iter().map(|&k| vals[k]).sum::<C64>() / size as f64;
        let mut shifted = m.clone();
        for d in 0..n {
            shifted[(d, d)] -= mean;
        }
        let mut p = shifted.clone();
        for _ in 1..size {
            p = &p * &shifted;
        }
        let sv = svd(&p).sigma;
        let small = sv[n - size];
        if small <= 1e-13 * scale.powi(size as i32) {
            for &k in &members {
                vals[k] = mean;
            }
        }
    }
}

/// Eigen-decomposition of a general complex square matrix.
pub fn eig(m: &CMatrix) -> Result<EigenDecomposition> {
    check_square(m)?;
    if !m.is_finite() {
        return Err(Error::NonFinite("eigen-decomposition input".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            right_vectors: CMatrix::zeros(0, 0),
            left_vectors: CMatrix::zeros(0, 0),
            is_defective: false,
        });
    }
    let mut t = m.as_slice().to_vec();
    let mut z = CMatrix::identity(n).into_vec();
    hessenberg(n, &mut t, &mut z);
    schur(n, &mut t, &mut z)?;

    let tnorm = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut vals: Vec<C64> = (0..n).map(|i| t[i * n + i]).collect();
    // Eigenvectors of the triangular factor, then back to the original basis.
    let mut right = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = t[k * n + k];
        let mut x = vec![ZERO; n];
        x[k] = ONE;
        for i in (0..k).rev() {
            let s: C64 = (i + 1..=k).map(|j| t[i * n + j] * x[j]).sum();
            let mut d = t[i * n + i] - lam;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            x[i] = -s / d;
            // Rescale to keep the growth in range.
            let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for z in x.iter_mut() {
                    *z /= big;
                }
            }
        }
        let mut v: Vec<C64> = (0..n).map(|i| (0..=k).map(|j| z[i * n + j] * x[j]).sum()).collect();
        normalize(&mut v);
        right.set_col(k, &v);
    }

    let cond = condition_number(&right);
    let is_defective = !(cond <= DEFECTIVE_COND);
    // A size-2 Jordan block split by O(√ε) already has cond(V) ≈ 1e7.
    if !(cond <= MERGE_COND) {
        merge_defective_clusters(m, &mut vals);
    }
    let perm = spectral_permutation(&vals);
    let eigenvalues: Vec<C64> = perm.iter().map(|&i| vals[i]).collect();

    let (right_vectors, left_vectors) = if is_defective {
        let mut r = CMatrix::zeros(n, n);
        let mut l = CMatrix::zeros(n, n);
        for (k, &lam) in eigenvalues.iter().enumerate() {
            let rv = kernel_vector(m, lam);
            let mut lv = kernel_vector(&m.adjoint(), lam.conj());
            let ip: C64 = lv.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum();
            if ip.norm() > 1e-8 {
                let f = (ONE / ip).conj();
                for zz in lv.iter_mut() {
                    *zz *= f;
                }
            }
            r.set_col(k, &rv);
            l.set_col(k, &lv);
        }
        (r, l)
    } else {
        let r = CMatrix::from_fn(n, n, |i, j| right[(i, perm[j])]);
        let l = r.inverse()?.adjoint();
        (r, l)
    };
    Ok(EigenDecomposition { eigenvalues, right_vectors, left_vectors, is_defective })
}
