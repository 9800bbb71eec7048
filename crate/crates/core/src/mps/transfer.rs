use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{MatrixPair, SiteOperator};
use crate::numerics::{eig, kron, power_scaled, CMatrix, EigenDecomposition};
use crate::{Error, Result};

/// Relative window within which eigenvalue moduli count as tied with the
/// largest one.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// E = Σ_i conj(A_i) ⊗ A_i with its sorted spectrum.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub e: CMatrix,
    pub spectrum: EigenDecomposition,
    /// Number of eigenvalues whose modulus lies within 1e-9·|λ_max| of |λ_max|.
    pub degeneracy_of_max: usize,
}

impl TransferMatrix {
    pub fn eigenvalues(&self) -> &[C64] {
        &self.spectrum.eigenvalues
    }

    pub fn lambda_max(&self) -> C64 {
        self.spectrum.eigenvalues[0]
    }
}

pub fn transfer_matrix(pair: &MatrixPair) -> Result<TransferMatrix> {
    let e = operator_transfer(pair, &SiteOperator::identity());
    let spectrum = eig(&e)?;
    let top = spectrum.eigenvalues[0].norm();
    let degeneracy_of_max = spectrum
        .eigenvalues
        .iter()
        .filter(|l| (top - l.norm()).abs() <= DEGENERACY_TOL * top)
        .count();
    Ok(TransferMatrix { e, spectrum, degeneracy_of_max })
}

/// E_O = Σ_{ij} ⟨i|O|j⟩ conj(A_i) ⊗ A_j.
pub fn operator_transfer(pair: &MatrixPair, o: &SiteOperator) -> CMatrix {
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let w = o.matrix()[(i, j)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            let t = kron(&pair.get(i).conj(), pair.get(j)).scale(w);
            out = &out + &t;
        }
    }
    out
}

/// A number stored as e^log_scale · mantissa.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledScalar {
    pub log_scale: f64,
    pub mantissa: C64,
}

impl ScaledScalar {
    /// The plain value; overflows to infinity for very large n.
    pub fn value(&self) -> C64 {
        self.mantissa * self.log_scale.exp()
    }

    /// ln|value|.
    pub fn ln_abs(&self) -> f64 {
        self.log_scale + self.mantissa.norm().ln()
    }
}

/// Z = tr(E^n) in scaled form. Fails with a null-state error when Z vanishes
/// against the size of E^n (|tr P| ≤ 1e-30·‖P‖∞).
pub fn norm_z(pair: &MatrixPair, n: u64) -> Result<ScaledScalar> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain length must be at least 1".into()));
    }
    let e = operator_transfer(pair, &SiteOperator::identity());
    let (p, s) = power_scaled(&e, n)?;
    let tr = p.trace();
    if s == f64::NEG_INFINITY || tr.norm() <= 1e-30 * p.norm_inf() {
        return Err(Error::NullState(format!("Z = tr(E^{n}) vanishes")));
    }
    Ok(ScaledScalar { log_scale: s, mantissa: tr })
}
