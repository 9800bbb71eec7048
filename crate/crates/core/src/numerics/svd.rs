//! One-sided Jacobi SVD, Householder QR and null spaces.

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Thin singular value decomposition A = U Σ Vᴴ of an m×n matrix computed
/// by one-sided Jacobi rotations on the columns. `sigma` has n entries in
/// descending order, `v` is n×n unitary; columns of `u` belonging to zero
/// singular values are left zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    // Column-major working copies.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let tol = f64::EPSILON;
    // Pairs whose overlap is negligible against the whole matrix are skipped;
    // this also keeps the rotation away from subnormal arithmetic.
    let floor = 1e-30 * cols.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let gabs = gamma.norm();
                if gabs <= floor || gabs <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                let (lo, hi) = cols.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let yq = *y * ph;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
                let (lo, hi) = vcols.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let yq = *y * ph;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u = CMatrix::zeros(m, n);
    let mut v = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            let uc: Vec<C64> = cols[j].iter().map(|z| z / s).collect();
            u.set_col(k, &uc);
        }
        v.set_col(k, &vcols[j]);
    }
    Svd { sigma, u, v }
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    svd(a).sigma
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Householder QR of a tall m×n matrix (m ≥ n). Returns the full m×m unitary
/// Q and the n×n upper-triangular top block of R.
fn householder_qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut refl: Vec<(usize, C64, Vec<C64>)> = Vec::with_capacity(n);
    for k in 0..n.min(m) {
        let alpha = cols[k][k];
        let xnorm2: f64 = cols[k][k + 1..].iter().map(|z| z.norm_sqr()).sum();
        if xnorm2 == 0.0 && alpha.im == 0.0 {
            continue;
        }
        let anorm = (alpha.norm_sqr() + xnorm2).sqrt();
        let beta = if alpha.re >= 0.0 { -anorm } else { anorm };
        let tau = (C64::new(beta, 0.0) - alpha) / beta;
        let inv = C64::new(1.0, 0.0) / (alpha - beta);
        let mut v: Vec<C64> = cols[k][k..].to_vec();
        v[0] = C64::new(1.0, 0.0);
        for z in v[1..].iter_mut() {
            *z *= inv;
        }
        // Hᴴ = I - conj(tau) v vᴴ applied to the remaining columns.
        for col in cols.iter_mut().skip(k + 1) {
            let s: C64 = v.iter().zip(&col[k..]).map(|(x, y)| x.conj() * y).sum();
            let f = tau.conj() * s;
            for (c, &vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        cols[k][k] = C64::new(beta, 0.0);
        for z in cols[k][k + 1..].iter_mut() {
            *z = ZERO;
        }
        refl.push((k, tau, v));
    }
    let r = CMatrix::from_fn(n, n, |i, j| if i <= j { cols[j][i] } else { ZERO });
    // Q = H_0 H_1 ... H_{n-1}; build columns by applying reflectors in reverse.
    let mut qcols: Vec<Vec<C64>> = (0..m)
        .map(|j| {
            let mut e = vec![ZERO; m];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    for (k, tau, v) in refl.iter().rev() {
        for col in qcols.iter_mut() {
            let s: C64 = v.iter().zip(&col[*k..]).map(|(x, y)| x.conj() * y).sum();
            if s == ZERO {
                continue;
            }
            let f = *tau * s;
            for (c, &vi) in col[*k..].iter_mut().zip(v) {
                *c -= f * vi;
            }
        }
    }
    let q = CMatrix::from_fn(m, m, |i, j| qcols[j][i]);
    (q, r)
}

/// Orthonormal basis of the left null space {c : c·m = 0}, returned as row
/// vectors. A direction counts as null when its singular value is at most
/// `tol·σ_max`; a zero matrix has the whole space as null space.
pub fn left_null_space(m: &CMatrix, tol: f64) -> Vec<Vec<C64>> {
    let (p, q) = (m.rows(), m.cols());
    if p == 0 {
        return Vec::new();
    }
    if m.max_abs() == 0.0 {
        return (0..p)
            .map(|i| {
                let mut e = vec![ZERO; p];
                e[i] = C64::new(1.0, 0.0);
                e
            })
            .collect();
    }
    if p <= q {
        // c·m = 0  ⇔  mᴴ conj(c)ᵀ = 0: right null space of mᴴ (q×p) by Jacobi.
        let s = svd(&m.adjoint());
        let smax = s.sigma[0];
        return (0..p)
            .filter(|&j| s.sigma[j] <= tol * smax)
            .map(|j| s.v.col(j).iter().map(|z| z.conj()).collect())
            .collect();
    }
    let (qm, r) = householder_qr(m);
    let s = svd(&r.adjoint());
    let smax = s.sigma[0];
    let mut out = Vec::new();
    for j in 0..q {
        if s.sigma[j] <= tol * smax {
            let w = s.v.col(j);
            let row: Vec<C64> = (0..p)
                .map(|i| (0..q).map(|l| qm[(i, l)] * w[l]).sum::<C64>().conj())
                .collect();
            out.push(row);
        }
    }
    for j in q..p {
        out.push(qm.col(j).iter().map(|z| z.conj()).collect());
    }
    out
}

/// Orthonormal basis of the right null space {x : m x = 0}.
pub fn null_space(m: &CMatrix, tol: f64) -> Vec<Vec<C64>> {
    left_null_space(&m.adjoint(), tol)
        .into_iter()
        .map(|c| c.into_iter().map(|z| z.conj()).collect())
        .collect()
}
