use num_complex::Complex64 as C64;

use super::transfer::{norm_z, operator_transfer, transfer_matrix, TransferMatrix, DEGENERACY_TOL};
use super::{MatrixPair, SiteOperator};
use crate::numerics::{power_scaled, CMatrix};
use crate::{Error, Result};

/// Evaluation mode for one-point functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Periodic chain of n sites, operator on site `site` (1-based).
    Finite { n: u64, site: u64 },
    Thermodynamic,
}

/// Evaluation mode for two-point functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoPointMode {
    Finite { n: u64 },
    Thermodynamic,
    /// Only the sub-leading eigenvalue term of the connected correlator.
    Asymptotic,
}

/// (P, s) with m^k = e^s P; zero powers of a nilpotent matrix come back as
/// (0, -∞), which the callers treat as an exact zero.
fn scaled_power(m: &CMatrix, k: u64) -> Result<(CMatrix, f64)> {
    power_scaled(m, k)
}

fn scaled_ratio(num: C64, den: C64, log_scale: f64) -> C64 {
    if log_scale == f64::NEG_INFINITY || num == C64::new(0.0, 0.0) {
        return C64::new(0.0, 0.0);
    }
    num / den * log_scale.exp()
}

fn unit(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn bra_ket(l: &[C64], m: &CMatrix, r: &[C64]) -> C64 {
    let mr = m.matvec(r);
    l.iter().zip(&mr).map(|(a, b)| a.conj() * b).sum()
}

/// Indices of the leading eigenvalues, checked for a well-defined limit.
fn leading_block(t: &TransferMatrix) -> Result<Vec<usize>> {
    let vals = t.eigenvalues();
    let top = vals[0];
    if top.norm() == 0.0 {
        return Err(Error::NullState("transfer matrix is nilpotent".into()));
    }
    let block: Vec<usize> = (0..t.degeneracy_of_max).collect();
    for &a in &block {
        if (vals[a] - top).norm() > DEGENERACY_TOL * top.norm() {
            return Err(Error::NoThermodynamicLimit(format!(
                "leading eigenvalues {} and {} have equal modulus but different phase",
                top, vals[a]
            )));
        }
    }
    Ok(block)
}

/// One-point function ⟨O⟩.
pub fn expectation(pair: &MatrixPair, o: &SiteOperator, mode: Mode) -> Result<C64> {
    let e = operator_transfer(pair, &SiteOperator::identity());
    let eo = operator_transfer(pair, o);
    match mode {
        Mode::Finite { n, site } => {
            if n == 0 || site == 0 || site > n {
                return Err(Error::InvalidArgument(format!("site {site} outside chain of {n} sites")));
            }
            let z = norm_z(pair, n)?;
            let (p1, s1) = scaled_power(&e, site - 1)?;
            let (p2, s2) = scaled_power(&e, n - site)?;
            let num = (&(&p1 * &eo) * &p2).trace();
            Ok(scaled_ratio(num, z.mantissa, s1 + s2 - z.log_scale))
        }
        Mode::Thermodynamic => {
            let t = transfer_matrix(pair)?;
            if t.spectrum.is_defective && t.degeneracy_of_max > 1 {
                return Err(Error::Defective(
                    "leading eigenspace is defective; use a finite chain instead".into(),
                ));
            }
            let block = leading_block(&t)?;
            let sp = &t.spectrum;
            let mut acc = C64::new(0.0, 0.0);
            for &a in &block {
                let l = sp.left_vectors.col(a);
                let r = sp.right_vectors.col(a);
                acc += bra_ket(&l, &eo, &r) / sp.eigenvalues[a];
            }
            Ok(acc / block.len() as f64)
        }
    }
}

/// ⟨O(1) O(r)⟩ (not connected).
pub fn two_point(pair: &MatrixPair, o: &SiteOperator, r: u64, mode: TwoPointMode) -> Result<C64> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("separation r = {r}; sites are 1 and r, so r >= 2")));
    }
    let e = operator_transfer(pair, &SiteOperator::identity());
    let eo = operator_transfer(pair, o);
    match mode {
        TwoPointMode::Finite { n } => {
            if r > n {
                return Err(Error::InvalidArgument(format!("site r = {r} outside chain of {n} sites")));
            }
            let z = norm_z(pair, n)?;
            let (p1, s1) = scaled_power(&e, r - 2)?;
            let (p2, s2) = scaled_power(&e, n - r)?;
            let num = (&(&(&eo * &p1) * &eo) * &p2).trace();
            Ok(scaled_ratio(num, z.mantissa, s1 + s2 - z.log_scale))
        }
        TwoPointMode::Thermodynamic | TwoPointMode::Asymptotic => {
            let t = transfer_matrix(pair)?;
            if t.spectrum.is_defective {
                return Err(Error::Defective("spectral sums need a diagonalizable E; use a finite chain instead".into()));
            }
            let block = leading_block(&t)?;
            let sp = &t.spectrum;
            let vals = &sp.eigenvalues;
            let terms: Vec<usize> = if mode == TwoPointMode::Thermodynamic {
                (0..vals.len()).collect()
            } else {
                // First modulus group after the leading block.
                let g = block.len();
                if g == vals.len() {
                    Vec::new()
                } else {
                    let m1 = vals[g].norm();
                    (g..vals.len())
                        .filter(|&i| (vals[i].norm() - m1).abs() <= DEGENERACY_TOL * vals[0].norm())
                        .collect()
                }
            };
            let mut acc = C64::new(0.0, 0.0);
            for &a in &block {
                let la = sp.left_vectors.col(a);
                let ra = sp.right_vectors.col(a);
                for &i in &terms {
                    let li = sp.left_vectors.col(i);
                    let ri = sp.right_vectors.col(i);
                    let w = bra_ket(&la, &eo, &ri) * bra_ket(&li, &eo, &ra);
                    let ratio = vals[i] / vals[a];
                    acc += w * ratio.powi((r - 2) as i32) / (vals[a] * vals[a]);
                }
            }
            Ok(acc / block.len() as f64)
        }
    }
}

/// ⟨O(1)O(r)⟩ − ⟨O(1)⟩⟨O(r)⟩. In asymptotic mode this is the single
/// sub-leading term.
pub fn connected_two_point(pair: &MatrixPair, o: &SiteOperator, r: u64, mode: TwoPointMode) -> Result<C64> {
    match mode {
        TwoPointMode::Finite { n } => {
            let full = two_point(pair, o, r, mode)?;
            let a = expectation(pair, o, Mode::Finite { n, site: 1 })?;
            let b = expectation(pair, o, Mode::Finite { n, site: r })?;
            Ok(full - a * b)
        }
        TwoPointMode::Thermodynamic => {
            let full = two_point(pair, o, r, mode)?;
            let a = expectation(pair, o, Mode::Thermodynamic)?;
            Ok(full - a * a)
        }
        TwoPointMode::Asymptotic => two_point(pair, o, r, mode),
    }
}

/// ξ = 1/ln(|λ_max|/|λ₁|). With an operator, λ₁ is the largest sub-leading
/// eigenvalue with a nonzero matrix element ⟨λ₁|E_O|λ_max⟩. Degenerate
/// leading moduli give +∞; a vanishing λ₁ (or no coupled eigenvalue) gives 0.
pub fn correlation_length(pair: &MatrixPair, o: Option<&SiteOperator>) -> Result<f64> {
    let t = transfer_matrix(pair)?;
    correlation_length_of(&t, o.map(|op| operator_transfer(pair, op)).as_ref())
}

pub(crate) fn correlation_length_of(t: &TransferMatrix, eo: Option<&CMatrix>) -> Result<f64> {
    let vals = t.eigenvalues();
    let top = vals[0].norm();
    if top == 0.0 {
        return Err(Error::NullState("transfer matrix is nilpotent".into()));
    }
    if t.degeneracy_of_max > 1 {
        return Ok(f64::INFINITY);
    }
    let sp = &t.spectrum;
    let r0 = sp.right_vectors.col(0);
    let lambda1 = (1..vals.len()).find(|&i| match eo {
        None => true,
        Some(eo) => {
            let li = sp.left_vectors.col(i);
            let elem = bra_ket(&li, eo, &r0).norm() / (unit(&li) * unit(&r0));
            elem > 1e-10 * eo.norm_fro()
        }
    });
    let Some(i) = lambda1 else { return Ok(0.0) };
    let m1 = vals[i].norm();
    if m1 <= 1e-12 * top {
        return Ok(0.0);
    }
    if (top - m1).abs() <= DEGENERACY_TOL * top {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (top / m1).ln())
}

/// Reduced density matrix of the first k sites of an n-site periodic chain,
/// ρ_ij = tr((conj(P_j) ⊗ P_i)·E^{n−k}) / Z with P_i the product of the
/// matrices along the block configuration i (site 1 most significant).
/// Dense output is limited to k ≤ 12.
pub fn reduced_density_matrix(pair: &MatrixPair, k: usize, n: usize) -> Result<CMatrix> {
    if k == 0 || k > n || n > 14 {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n <= 14, got k={k}, n={n}")));
    }
    if k > 12 {
        return Err(Error::InvalidArgument(format!("dense reduced density matrix limited to k <= 12, got {k}")));
    }
    let z = norm_z(pair, n as u64)?;
    let e = operator_transfer(pair, &SiteOperator::identity());
    let (p, s) = power_scaled(&e, (n - k) as u64)?;
    let factor = if s == f64::NEG_INFINITY { C64::new(0.0, 0.0) } else { (s - z.log_scale).exp() / z.mantissa };
    let m = p.scale(factor);
    let products = block_products(pair, k);
    let dim = products.len();
    // T_i[(a,b)] = Σ_{c,d} P_i[c][d] M[2b+d][2a+c]
    let t: Vec<[C64; 4]> = products
        .iter()
        .map(|pi| {
            let mut out = [C64::new(0.0, 0.0); 4];
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..2 {
                        for d in 0..2 {
                            acc += pi[2 * c + d] * m[(2 * b + d, 2 * a + c)];
                        }
                    }
                    out[2 * a + b] = acc;
                }
            }
            out
        })
        .collect();
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let pj = &products[j];
        (0..4).map(|ab| pj[ab].conj() * t[i][ab]).sum()
    }))
}

/// Row-major entries of A_{i₁}···A_{i_k} for every configuration, indexed with
/// site 1 as the most significant bit.
pub(crate) fn block_products(pair: &MatrixPair, k: usize) -> Vec<[C64; 4]> {
    let mut out: Vec<[C64; 4]> = vec![[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * 2);
        for p in &out {
            for b in 0..2 {
                let a = pair.get(b);
                let mut q = [C64::new(0.0, 0.0); 4];
                for r in 0..2 {
                    for c in 0..2 {
                        q[2 * r + c] = p[2 * r] * a[(0, c)] + p[2 * r + 1] * a[(1, c)];
                    }
                }
                next.push(q);
            }
        }
        out = next;
    }
    out
}
