//! Translationally invariant spin-1/2 MPS defined by a pair of 2×2 matrices.
//!
//! Amplitudes are ψ(i₁…i_N) = tr(A_{i₁}···A_{i_N}) and are never normalized
//! here; normalization enters only where a probability or expectation value is
//! returned. Large powers of the transfer matrix are carried in scaled form.

mod observables;
mod transfer;

pub use observables::{
    connected_two_point, correlation_length, expectation, reduced_density_matrix, two_point, Mode,
    TwoPointMode,
};
pub(crate) use observables::{block_products, correlation_length_of};
pub use transfer::{norm_z, operator_transfer, transfer_matrix, ScaledScalar, TransferMatrix};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::numerics::CMatrix;
use crate::{Error, Result};

/// The auxiliary matrices (A₀, A₁).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct MatrixPair {
    a0: CMatrix,
    a1: CMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRepr {
    a0: CMatrix,
    a1: CMatrix,
}

impl TryFrom<PairRepr> for MatrixPair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        MatrixPair::new(r.a0, r.a1)
    }
}

impl From<MatrixPair> for PairRepr {
    fn from(p: MatrixPair) -> Self {
        PairRepr { a0: p.a0, a1: p.a1 }
    }
}

impl MatrixPair {
    pub fn new(a0: CMatrix, a1: CMatrix) -> Result<Self> {
        for (name, m) in [("a0", &a0), ("a1", &a1)] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::Dimension(format!("{name} must be 2x2, got {}x{}", m.rows(), m.cols())));
            }
            if !m.is_finite() {
                return Err(Error::NonFinite(name.into()));
            }
        }
        if a0.is_zero() && a1.is_zero() {
            return Err(Error::InvalidArgument("a0 and a1 are both zero".into()));
        }
        Ok(MatrixPair { a0, a1 })
    }

    /// Pair of real matrices given row-major.
    pub fn real(a0: [f64; 4], a1: [f64; 4]) -> Result<Self> {
        Self::new(CMatrix::from_real(2, 2, &a0), CMatrix::from_real(2, 2, &a1))
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a0
    }

    pub fn a1(&self) -> &CMatrix {
        &self.a1
    }

    /// A_i for a physical index i ∈ {0, 1}.
    pub fn get(&self, i: usize) -> &CMatrix {
        match i {
            0 => &self.a0,
            1 => &self.a1,
            _ => panic!("physical index {i} out of range"),
        }
    }

    /// Largest Frobenius norm of the two matrices; the reference scale for
    /// relative tolerances.
    pub fn scale(&self) -> f64 {
        self.a0.norm_fro().max(self.a1.norm_fro())
    }

    /// The pair with A₀ and A₁ exchanged.
    pub fn swapped(&self) -> MatrixPair {
        MatrixPair { a0: self.a1.clone(), a1: self.a0.clone() }
    }

    pub fn transposed(&self) -> MatrixPair {
        MatrixPair { a0: self.a0.transpose(), a1: self.a1.transpose() }
    }

    /// Largest Frobenius distance between corresponding matrices.
    pub fn dist(&self, other: &MatrixPair) -> f64 {
        self.a0.dist(&other.a0).max(self.a1.dist(&other.a1))
    }
}

/// A single-site operator (2×2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteOperator(CMatrix);

impl SiteOperator {
    pub fn new(op: CMatrix) -> Result<Self> {
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::Dimension(format!("site operator must be 2x2, got {}x{}", op.rows(), op.cols())));
        }
        if !op.is_finite() {
            return Err(Error::NonFinite("site operator".into()));
        }
        Ok(SiteOperator(op))
    }

    pub fn identity() -> Self {
        SiteOperator(CMatrix::identity(2))
    }

    pub fn sigma_x() -> Self {
        SiteOperator(CMatrix::real2(0.0, 1.0, 1.0, 0.0))
    }

    pub fn sigma_y() -> Self {
        let i = C64::new(0.0, 1.0);
        SiteOperator(CMatrix::from_vec(2, 2, vec![C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)]).expect("2x2"))
    }

    pub fn sigma_z() -> Self {
        SiteOperator(CMatrix::real2(1.0, 0.0, 0.0, -1.0))
    }

    /// Looks up a Pauli operator by letter (I, X, Y, Z; case-insensitive).
    pub fn pauli(letter: char) -> Option<Self> {
        match letter.to_ascii_uppercase() {
            'I' => Some(Self::identity()),
            'X' => Some(Self::sigma_x()),
            'Y' => Some(Self::sigma_y()),
            'Z' => Some(Self::sigma_z()),
            _ => None,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// ψ(config) = tr(A_{i₁}···A_{i_N}); `config` holds 0/1 entries, site 1 first.
pub fn amplitude(pair: &MatrixPair, config: &[u8]) -> Result<C64> {
    if config.is_empty() {
        return Err(Error::InvalidArgument("empty configuration".into()));
    }
    let mut prod = CMatrix::identity(2);
    for &b in config {
        if b > 1 {
            return Err(Error::InvalidArgument(format!("configuration entry {b} is not 0 or 1")));
        }
        prod = &prod * pair.get(b as usize);
    }
    Ok(prod.trace())
}

/// Parses a bit string such as "0110".
pub fn parse_config(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!("configuration character {c:?}"))),
        })
        .collect()
}

/// A_i → μ·U·A_i·U⁻¹.
pub fn gauge_transform(pair: &MatrixPair, u: &CMatrix, mu: C64) -> Result<MatrixPair> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::Dimension("gauge matrix must be 2x2".into()));
    }
    let n2 = u.norm_fro().powi(2);
    if !(u.det2().norm() > 1e-12 * n2) {
        return Err(Error::Singular("gauge matrix".into()));
    }
    if mu.norm() == 0.0 || !mu.re.is_finite() || !mu.im.is_finite() {
        return Err(Error::InvalidArgument("gauge scalar must be nonzero and finite".into()));
    }
    let ui = u.inverse()?;
    let t = |a: &CMatrix| (&(u * a) * &ui).scale(mu);
    MatrixPair::new(t(&pair.a0), t(&pair.a1))
}

/// When both matrices are diagonal the state is a sum of two product states,
/// |ψ⟩ = Φ₁^⊗N + Φ₂^⊗N with Φ_m = A₀[m,m]|0⟩ + A₁[m,m]|1⟩. Returns
/// [Φ₁, Φ₂] as coefficient pairs, or None when an off-diagonal entry exceeds
/// 1e-12 of the pair scale.
pub fn diagonal_product_decomposition(pair: &MatrixPair) -> Option<[[C64; 2]; 2]> {
    let tol = 1e-12 * pair.scale();
    for a in [&pair.a0, &pair.a1] {
        if a[(0, 1)].norm() > tol || a[(1, 0)].norm() > tol {
            return None;
        }
    }
    Some([
        [pair.a0[(0, 0)], pair.a1[(0, 0)]],
        [pair.a0[(1, 1)], pair.a1[(1, 1)]],
    ])
}
