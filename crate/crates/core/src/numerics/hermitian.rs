//! Hermitian eigensolver: Householder tridiagonalization followed by implicit
//! QL on the real tridiagonal matrix. Generic over real and complex entries so
//! real symmetric Hamiltonians take the cheaper path.

use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use crate::{Error, Result};

pub(crate) trait Scalar:
    Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    fn zero() -> Self;
    fn from_re(x: f64) -> Self;
    fn re(self) -> f64;
    fn conj(self) -> Self;
    fn abs_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn to_c64(self) -> C64;
    fn recip(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn conj(self) -> Self {
        self
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn recip(self) -> Self {
        let s = self.re.abs().max(self.im.abs());
        let z = self / s;
        z.conj() / z.norm_sqr() / s
    }
}

fn dot_conj<S: Scalar>(a: &[S], b: &[S]) -> S {
    // Σ conj(a_i) b_i
    let mut s = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += x.conj() * y;
    }
    s
}

/// Reduce the Hermitian matrix `a` (n×n row-major, only the lower triangle is
/// read) to real tridiagonal form T = Qᴴ A Q. Returns the diagonal, the
/// sub-diagonal and, when requested, Qᵀ stored row-major (row i of the
/// returned buffer is column i of Q).
fn tridiagonalize<S: Scalar>(n: usize, mut a: Vec<S>, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<S>>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // Reflectors: (start row, tau, v) with v[0] = 1 implicit.
    let mut reflectors: Vec<(usize, S, Vec<S>)> = Vec::new();

    // Symmetrize from the lower triangle so the row-based kernels can work on
    // full rows.
    for i in 0..n {
        for j in 0..i {
            let x = a[i * n + j];
            a[j * n + i] = x.conj();
        }
        let x = a[i * n + i].re();
        a[i * n + i] = S::from_re(x);
    }

    let mut p = vec![S::zero(); n];
    let mut w = vec![S::zero(); n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        // Column k below the diagonal, read from row k (conjugated) since the
        // working matrix is kept Hermitian in full.
        let mut v: Vec<S> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let alpha = v[0];
        let big = v.iter().map(|x| x.abs_sqr()).fold(0.0, f64::max).sqrt();
        let alpha_im2 = alpha.abs_sqr() - alpha.re() * alpha.re();
        let tail_zero = v[1..].iter().all(|x| x.abs_sqr() == 0.0);
        if big == 0.0 || (tail_zero && alpha_im2 <= 0.0) {
            d[k] = a[k * n + k].re();
            e[k] = alpha.re();
            continue;
        }
        // Norms computed on the rescaled column to avoid underflow.
        let anorm = big * v.iter().map(|x| x.scale(1.0 / big).abs_sqr()).sum::<f64>().sqrt();
        let beta = if alpha.re() >= 0.0 { -anorm } else { anorm };
        // tau = (beta - alpha) / beta, v = x / (alpha - beta)
        let tau = (S::from_re(beta) - alpha).scale(1.0 / beta);
        let inv = (alpha - S::from_re(beta)).recip();
        for x in v[1..].iter_mut() {
            *x = *x * inv;
        }
        v[0] = S::from_re(1.0);

        // Apply H = I - tau v vᴴ on both sides of the trailing block:
        // A ← Hᴴ A H with p = conj(tau)·... use the standard her2 update.
        // p = tau * A v
        let sub = k + 1;
        for (ii, pi) in p[..m].iter_mut().enumerate() {
            let row = &a[(sub + ii) * n + sub..(sub + ii) * n + n];
            let mut s = S::zero();
            for (&aij, &vj) in row.iter().zip(&v) {
                s += aij * vj;
            }
            *pi = tau * s;
        }
        // w = p - (1/2) tau (pᴴ v)... for Hᴴ A H with H = I - tau v vᴴ:
        // alpha2 = -(1/2) conj(tau) (vᴴ p)... follow zhetd2.
        let vp = dot_conj(&v, &p[..m]);
        let half = S::from_re(-0.5) * tau.conj() * vp;
        for i in 0..m {
            w[i] = p[i] + half * v[i];
        }
        // A ← A - v wᴴ - w vᴴ
        for i in 0..m {
            let vi = v[i];
            let wi = w[i];
            let row = &mut a[(sub + i) * n + sub..(sub + i) * n + n];
            for j in 0..m {
                row[j] -= vi * w[j].conj() + wi * v[j].conj();
            }
        }
        d[k] = a[k * n + k].re();
        e[k] = beta;
        if want_q {
            reflectors.push((sub, tau, v));
        }
    }
    if n > 0 {
        d[n - 1] = a[(n - 1) * n + n - 1].re();
    }
    drop(a);

    let q = if want_q {
        // Qᵀ row-major equals Q column-major; accumulate Q = H_0 H_1 ... by
        // applying reflectors in reverse to the identity. With storage
        // qt[j][i] = Q[i][j], H acting on rows of Q becomes an update of the
        // columns i in every stored row j.
        let mut qt = vec![S::zero(); n * n];
        for i in 0..n {
            qt[i * n + i] = S::from_re(1.0);
        }
        for (sub, tau, v) in reflectors.iter().rev() {
            // Q ← H Q, H = I - tau v vᴴ acting on indices sub..n.
            for j in *sub..n {
                let col = &mut qt[j * n + sub..j * n + n];
                let s = dot_conj(v, col);
                let f = *tau * s;
                for (c, &vi) in col.iter_mut().zip(v) {
                    *c -= f * vi;
                }
            }
        }
        Some(qt)
    } else {
        None
    };
    (d, e, q)
}

/// Implicit QL iterations on the tridiagonal (d, e), e[i] = T[i+1, i].
/// Rotations are applied to the rows of `zt` (rows are eigenvectors).
fn tridiagonal_ql<S: Scalar>(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut [S]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let tnorm = d.iter().chain(e.iter()).map(|x| x.abs()).fold(0.0, f64::max);
    let floor = 0.1 * f64::EPSILON * tnorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence("tridiagonal QL".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..(i + 1) * n];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = a.scale(s) + f.scale(c);
                        *a = a.scale(c) - f.scale(s);
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn solve<S: Scalar>(n: usize, a: Vec<S>, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<S>>)> {
    let (mut d, mut e, mut qt) = tridiagonalize(n, a, want_vectors);
    tridiagonal_ql(&mut d, &mut e, qt.as_deref_mut())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vecs = qt.map(|z| {
        let mut out = Vec::with_capacity(n * n);
        for &i in &order {
            out.extend_from_slice(&z[i * n..(i + 1) * n]);
        }
        out
    });
    Ok((vals, vecs))
}

fn check_square(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("Hermitian eigensolver needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn is_real(m: &CMatrix) -> bool {
    m.as_slice().iter().all(|z| z.im == 0.0)
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is referenced.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    let n = m.rows();
    if is_real(m) {
        let a: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
        Ok(solve(n, a, false)?.0)
    } else {
        Ok(solve(n, m.as_slice().to_vec(), false)?.0)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix. Only the lower triangle is referenced.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_square(m)?;
    let n = m.rows();
    let (vals, rows): (Vec<f64>, Vec<C64>) = if is_real(m) {
        let a: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
        let (v, z) = solve(n, a, true)?;
        (v, z.unwrap_or_default().into_iter().map(Scalar::to_c64).collect())
    } else {
        let (v, z) = solve(n, m.as_slice().to_vec(), true)?;
        (v, z.unwrap_or_default())
    };
    // rows[i] is eigenvector i; transpose into columns.
    let vecs = CMatrix::from_fn(n, n, |i, j| rows[j * n + i]);
    Ok((vals, vecs))
}
