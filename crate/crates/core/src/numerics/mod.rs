//! Dense complex linear algebra used throughout the crate.

mod eig;
mod hermitian;
mod matrix;
mod svd;

pub use eig::{eig, eigvals, sort_spectral, spectral_order, spectral_permutation, EigenDecomposition, DEFECTIVE_COND};
pub use hermitian::{eigh, eigvalsh};
pub use matrix::{kron, CMatrix};
pub use svd::{condition_number, left_null_space, null_space, singular_values, svd, Svd};

use crate::{Error, Result};

/// Default relative rank tolerance for null spaces.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Computes m^n as e^s·P with ‖P‖∞ in [1/2, 2] by repeated squaring,
/// renormalizing after every product. A nilpotent power returns P = 0 and
/// s = -∞.
pub fn power_scaled(m: &CMatrix, n: u64) -> Result<(CMatrix, f64)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("power of {}x{} matrix", m.rows(), m.cols())));
    }
    let dim = m.rows();
    if n == 0 {
        return Ok((CMatrix::identity(dim), 0.0));
    }
    fn renorm(p: &mut CMatrix, s: &mut f64) {
        let nrm = p.norm_inf();
        if nrm == 0.0 {
            *s = f64::NEG_INFINITY;
        } else {
            *p = p.scale_re(1.0 / nrm);
            *s += nrm.ln();
        }
    }
    let mut base = m.clone();
    let mut sb = 0.0;
    renorm(&mut base, &mut sb);
    let mut acc: Option<(CMatrix, f64)> = None;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), sb),
                Some((a, sa)) => {
                    let mut p = &a * &base;
                    let mut s = sa + sb;
                    renorm(&mut p, &mut s);
                    (p, s)
                }
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        let mut sq = &base * &base;
        sb *= 2.0;
        renorm(&mut sq, &mut sb);
        base = sq;
    }
    let (p, s) = acc.expect("n >= 1");
    if s == f64::NEG_INFINITY || p.is_zero() {
        return Ok((CMatrix::zeros(dim, dim), f64::NEG_INFINITY));
    }
    Ok((p, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    #[test]
    fn scalar_matrix_power() {
        let (p, s) = power_scaled(&CMatrix::identity(4).scale_re(2.0), 10).unwrap();
        assert!((s - 10.0 * 2f64.ln()).abs() < 1e-13);
        assert!(p.dist(&CMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn diagonal_power() {
        let (p, s) = power_scaled(&CMatrix::real2(3.0, 0.0, 0.0, 1.0), 4).unwrap();
        let full = p.scale_re(s.exp());
        assert!(full.dist(&CMatrix::real2(81.0, 0.0, 0.0, 1.0)) < 1e-12);
        let nrm = p.norm_inf();
        assert!((0.5..=2.0).contains(&nrm));
    }

    #[test]
    fn zero_exponent_and_nilpotent() {
        let (p, s) = power_scaled(&CMatrix::real2(0.0, 1.0, 0.0, 0.0), 0).unwrap();
        assert_eq!((p, s), (CMatrix::identity(2), 0.0));
        let (p, s) = power_scaled(&CMatrix::real2(0.0, 1.0, 0.0, 0.0), 2).unwrap();
        assert!(p.is_zero() && s == f64::NEG_INFINITY);
    }

    #[test]
    fn matches_naive_products() {
        let mut rng = StdRng::seed_from_u64(1);
        let m = CMatrix::from_fn(4, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let mut naive = CMatrix::identity(4);
        for n in 1..=8u64 {
            naive = &naive * &m;
            let (p, s) = power_scaled(&m, n).unwrap();
            let got = p.scale_re(s.exp());
            assert!(got.dist(&naive) <= 1e-12 * naive.norm_fro(), "n={n}");
        }
    }
}
