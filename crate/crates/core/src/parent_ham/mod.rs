//! Parent Hamiltonians: null space of the k-site matrix-product system,
//! symmetric grouping of the null vectors, local projector sums and their
//! periodic chain assembly.
//!
//! A null vector c satisfies Σ_J c_J A_{j₁}···A_{j_k} = 0 (site 1 is the most
//! significant bit of J). The projector kets are conj(c), so that
//! ⟨e|ψ⟩ = Σ_J c_J ψ_J vanishes on every k-site window of the state.

mod chain;
mod pauli;

pub use chain::{assemble_chain, ChainHamiltonian, MAX_DENSE_SITES, MAX_MATVEC_SITES};
pub use pauli::{
    compare_with_printed, pauli_decomposition, translation_patterns, ComparisonReport, PauliDecomposition,
    PrintedForm, FIT_TOL,
};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::mps::{block_products, MatrixPair};
use crate::numerics::{left_null_space, CMatrix, DEFAULT_RANK_TOL};
use crate::symmetry::{find_parity_witness, find_spin_flip_witness, Witness};
use crate::{Error, Result};

/// Largest block size accepted by the null-space solver.
pub const MAX_BLOCK: usize = 12;
/// Default cap for the interaction-range search.
pub const DEFAULT_K_MAX: usize = 6;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullSpaceBasis {
    pub k: usize,
    /// Orthonormal solutions c of the k-site system.
    pub vectors: Vec<Vec<C64>>,
    pub tol: f64,
}

impl NullSpaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// ‖v − Pv‖/‖v‖ with P the orthogonal projector onto the span.
    pub fn span_residual(&self, v: &[C64]) -> f64 {
        span_residual(&self.vectors, v)
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Residual of `v` against the span of orthonormal `basis`.
pub fn span_residual(basis: &[Vec<C64>], v: &[C64]) -> f64 {
    let mut r = v.to_vec();
    for b in basis {
        let ip = dot(b, &r);
        for (x, y) in r.iter_mut().zip(b) {
            *x -= ip * y;
        }
    }
    let nv = norm(v);
    if nv == 0.0 {
        0.0
    } else {
        norm(&r) / nv
    }
}

/// Gram–Schmidt (two passes) of `vs` against `against` and each other;
/// vectors whose remaining norm falls below `tol` times their original norm
/// are dropped.
fn orthonormalize(vs: &[Vec<C64>], against: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        let n0 = norm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in against.iter().chain(out.iter()) {
                let ip = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= ip * y;
                }
            }
        }
        let n = norm(&w);
        if n > tol * n0 {
            out.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    out
}

/// The 2^k×4 matrix of flattened block products.
fn block_matrix(pair: &MatrixPair, k: usize) -> CMatrix {
    let rows = block_products(pair, k);
    CMatrix::from_fn(rows.len(), 4, |i, j| rows[i][j])
}

/// Orthonormal solutions of the k-site system, rank tolerance relative to the
/// largest singular value.
pub fn null_space_basis(pair: &MatrixPair, k: usize, tol: f64) -> Result<NullSpaceBasis> {
    if k == 0 || k > MAX_BLOCK {
        return Err(Error::InvalidArgument(format!("block size k={k} outside 1..={MAX_BLOCK}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("rank tolerance {tol} outside (0, 1)")));
    }
    let m = block_matrix(pair, k);
    Ok(NullSpaceBasis { k, vectors: left_null_space(&m, tol), tol })
}

/// Smallest k ≤ k_max with a nontrivial null space.
pub fn interaction_range(pair: &MatrixPair, k_max: usize) -> Result<Option<usize>> {
    if k_max > MAX_BLOCK {
        return Err(Error::InvalidArgument(format!("k_max={k_max} exceeds {MAX_BLOCK}")));
    }
    for k in 1..=k_max {
        if null_space_basis(pair, k, DEFAULT_RANK_TOL)?.dim() > 0 {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Physical-space symmetry actions on k-site configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Action {
    /// Complement every bit.
    SpinFlip,
    /// Reverse the site order.
    Reversal,
}

impl Action {
    pub fn apply_index(self, x: usize, k: usize) -> usize {
        match self {
            Action::SpinFlip => !x & ((1usize << k) - 1),
            Action::Reversal => {
                let mut y = 0;
                for s in 0..k {
                    y |= ((x >> s) & 1) << (k - 1 - s);
                }
                y
            }
        }
    }

    /// (Gv)_J = v_{g(J)}; both actions are involutions.
    pub fn apply(self, v: &[C64], k: usize) -> Vec<C64> {
        (0..v.len()).map(|x| v[self.apply_index(x, k)]).collect()
    }
}

/// Actions induced by the witnesses: a spin-flip witness gives bit
/// complement, a parity witness gives reversal.
pub fn actions_from_witnesses(witnesses: &[Witness]) -> Vec<Action> {
    let mut out = Vec::new();
    for w in witnesses {
        let a = match w {
            Witness::SpinFlip(_) => Action::SpinFlip,
            Witness::Parity(_) => Action::Reversal,
        };
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// All witnesses the solver finds for `pair`.
pub fn pair_witnesses(pair: &MatrixPair) -> Vec<Witness> {
    let mut w = Vec::new();
    if let Some(x) = find_spin_flip_witness(pair) {
        w.push(Witness::SpinFlip(x));
    }
    if let Some(p) = find_parity_witness(pair) {
        w.push(Witness::Parity(p));
    }
    w
}

/// Null basis split into mutually orthogonal groups, each invariant under
/// the symmetry actions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitBasis {
    pub k: usize,
    pub actions: Vec<Action>,
    /// Orthonormal vectors per group; groups are mutually orthogonal.
    pub groups: Vec<Vec<Vec<C64>>>,
    /// Sparse generators before orthonormalization, one list per group.
    pub generators: Vec<Vec<Vec<C64>>>,
}

impl OrbitBasis {
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn all_vectors(&self) -> Vec<Vec<C64>> {
        self.groups.iter().flatten().cloned().collect()
    }
}

/// Largest number of pivot-column subsets tried before falling back to the
/// joint eigenbasis.
const PIVOT_SEARCH_LIMIT: usize = 5000;
const CLOSURE_TOL: f64 = 1e-8;

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let d = c.len();
    for i in (0..d).rev() {
        if c[i] < n - d + i {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial_capped(n: usize, d: usize, cap: usize) -> usize {
    let d = d.min(n - d);
    let mut r: u128 = 1;
    for i in 0..d {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > cap as u128 {
            return cap + 1;
        }
    }
    r as usize
}

/// Basis with the identity on the pivot columns, or None when those columns
/// are (nearly) dependent.
fn pivot_basis(basis: &[Vec<C64>], pivots: &[usize]) -> Option<Vec<Vec<C64>>> {
    let d = basis.len();
    let sub = CMatrix::from_fn(d, d, |i, j| basis[i][pivots[j]]);
    let s = crate::numerics::singular_values(&sub);
    if s[d - 1] <= 1e-6 * s[0] {
        return None;
    }
    let inv = sub.inverse().ok()?;
    let len = basis[0].len();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        // Row i of sub⁻¹·basis has v[pivots[j]] = δ_ij.
        let mut v: Vec<C64> = (0..len).map(|x| (0..d).map(|r| inv[(i, r)] * basis[r][x]).sum()).collect();
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in v.iter_mut() {
            if z.norm() <= 1e-12 * scale {
                *z = ZERO;
            }
        }
        out.push(v);
    }
    Some(out)
}

/// Index j with w ∝ r_j, checked on all entries.
fn proportional_to(w: &[C64], rows: &[Vec<C64>], pivots: &[usize]) -> Option<usize> {
    let nz: Vec<usize> = (0..pivots.len()).filter(|&j| w[pivots[j]].norm() > 1e-9).collect();
    let [j] = nz[..] else { return None };
    let f = w[pivots[j]];
    let r: Vec<C64> = w.iter().zip(&rows[j]).map(|(a, b)| a - f * b).collect();
    (norm(&r) <= CLOSURE_TOL * norm(w)).then_some(j)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    if parent[i] != i {
        let r = find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

/// Sparse grouping: pivot-normalized bases whose vectors the actions map
/// onto multiples of each other.
fn sparse_groups(basis: &[Vec<C64>], k: usize, actions: &[Action]) -> Option<Vec<Vec<Vec<C64>>>> {
    let d = basis.len();
    let len = basis[0].len();
    if binomial_capped(len, d, PIVOT_SEARCH_LIMIT) > PIVOT_SEARCH_LIMIT {
        return None;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        if let Some(rows) = pivot_basis(basis, &pivots) {
            let mut parent: Vec<usize> = (0..d).collect();
            let mut closed = true;
            'check: for i in 0..d {
                for a in actions {
                    match proportional_to(&a.apply(&rows[i], k), &rows, &pivots) {
                        Some(j) => {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            parent[ri] = rj;
                        }
                        None => {
                            closed = false;
                            break 'check;
                        }
                    }
                }
            }
            if closed {
                let mut groups: Vec<(usize, Vec<Vec<C64>>)> = Vec::new();
                for (i, row) in rows.iter().enumerate().take(d) {
                    let r = find(&mut parent, i);
                    match groups.iter_mut().find(|(root, _)| *root == r) {
                        Some((_, g)) => g.push(row.clone()),
                        None => groups.push((r, vec![row.clone()])),
                    }
                }
                return Some(groups.into_iter().map(|(_, g)| g).collect());
            }
        }
        if !next_combination(&mut pivots, len) {
            return None;
        }
    }
}

/// Joint eigenvectors of the actions; each spans an invariant line.
fn eigen_groups(basis: &[Vec<C64>], k: usize, actions: &[Action]) -> Vec<Vec<Vec<C64>>> {
    let signs: Vec<Vec<f64>> = match actions.len() {
        0 => vec![vec![]],
        1 => vec![vec![1.0], vec![-1.0]],
        _ => vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]],
    };
    let mut found: Vec<Vec<C64>> = Vec::new();
    let mut groups = Vec::new();
    for chi in &signs {
        let projected: Vec<Vec<C64>> = basis
            .iter()
            .map(|b| {
                let mut v = b.clone();
                for (a, s) in actions.iter().zip(chi) {
                    let g = a.apply(&v, k);
                    v = v.iter().zip(&g).map(|(x, y)| (x + y * s) * 0.5).collect();
                }
                v
            })
            // Basis vectors are unit length, so this drops components that
            // are pure rounding noise.
            .filter(|v| norm(v) > 1e-6)
            .collect();
        let comp = orthonormalize(&projected, &found, 1e-6);
        for v in comp {
            found.push(v.clone());
            groups.push(vec![v]);
        }
    }
    groups
}

/// Regroups the null basis into subspaces closed under the actions. A sparse
/// pivot basis closed under the actions is preferred (its orbits are the
/// groups); otherwise every joint eigenvector forms its own group.
pub fn symmetry_orbits(basis: &NullSpaceBasis, actions: &[Action]) -> Result<OrbitBasis> {
    let k = basis.k;
    let vs = &basis.vectors;
    for a in actions {
        for v in vs {
            let r = span_residual(vs, &a.apply(v, k));
            if r > CLOSURE_TOL {
                return Err(Error::NotClosed(format!("{a:?} leaves the null space (residual {r:.3e})")));
            }
        }
    }
    if vs.is_empty() {
        return Ok(OrbitBasis { k, actions: actions.to_vec(), groups: vec![], generators: vec![] });
    }
    let generators = sparse_groups(vs, k, actions).unwrap_or_else(|| eigen_groups(vs, k, actions));
    let mut done: Vec<Vec<C64>> = Vec::new();
    let mut groups = Vec::new();
    for g in &generators {
        let on = orthonormalize(g, &done, 1e-8);
        done.extend(on.iter().cloned());
        groups.push(on);
    }
    Ok(OrbitBasis { k, actions: actions.to_vec(), groups, generators })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectorTerm {
    pub ket: Vec<C64>,
    pub weight: f64,
}

/// h = Σ_α μ_α |e_α⟩⟨e_α| on k sites.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalHamiltonian {
    pub k: usize,
    pub terms: Vec<ProjectorTerm>,
    pub dense: CMatrix,
}

impl LocalHamiltonian {
    /// Builds h from explicit kets and weights (kets need not be orthonormal).
    pub fn from_terms(k: usize, terms: Vec<ProjectorTerm>) -> Result<Self> {
        if k == 0 || k > MAX_BLOCK {
            return Err(Error::InvalidArgument(format!("block size k={k} outside 1..={MAX_BLOCK}")));
        }
        let dim = 1usize << k;
        let mut dense = CMatrix::zeros(dim, dim);
        for t in &terms {
            if t.ket.len() != dim {
                return Err(Error::Dimension(format!("ket of length {} for k={k}", t.ket.len())));
            }
            if !(t.weight.is_finite() && t.weight > 0.0) {
                return Err(Error::InvalidArgument(format!("weight {} must be positive", t.weight)));
            }
            if t.ket.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("ket".into()));
            }
            for i in 0..dim {
                if t.ket[i] == ZERO {
                    continue;
                }
                for j in 0..dim {
                    dense[(i, j)] += t.ket[i] * t.ket[j].conj() * t.weight;
                }
            }
        }
        Ok(LocalHamiltonian { k, terms, dense })
    }
}

/// One positive weight per group; kets are the conjugated null vectors.
pub fn local_hamiltonian(orbits: &OrbitBasis, weights: &[f64]) -> Result<LocalHamiltonian> {
    if weights.len() != orbits.groups.len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} groups",
            weights.len(),
            orbits.groups.len()
        )));
    }
    let mut terms = Vec::new();
    for (g, &w) in orbits.groups.iter().zip(weights) {
        for v in g {
            terms.push(ProjectorTerm { ket: v.iter().map(|z| z.conj()).collect(), weight: w });
        }
    }
    LocalHamiltonian::from_terms(orbits.k, terms)
}

/// Everything needed to rebuild the default parent Hamiltonian of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct ParentHamiltonian {
    pub k: usize,
    pub basis: NullSpaceBasis,
    pub orbits: OrbitBasis,
    pub local: LocalHamiltonian,
}

/// Minimal-range parent Hamiltonian with unit weight on every group. The
/// grouping uses the symmetry actions whose witnesses exist for the pair.
pub fn parent_hamiltonian(pair: &MatrixPair, k_max: usize) -> Result<ParentHamiltonian> {
    let k = interaction_range(pair, k_max)?
        .ok_or_else(|| Error::InvalidArgument(format!("no null space up to k_max={k_max}")))?;
    let basis = null_space_basis(pair, k, DEFAULT_RANK_TOL)?;
    let actions = actions_from_witnesses(&pair_witnesses(pair));
    let orbits = symmetry_orbits(&basis, &actions)?;
    let local = local_hamiltonian(&orbits, &vec![1.0; orbits.groups.len()])?;
    Ok(ParentHamiltonian { k, basis, orbits, local })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{build_model, ModelParams};
    use crate::mps::reduced_density_matrix;
    use crate::numerics::eigvalsh;
    use std::f64::consts::PI;

    fn ket(k: usize, entries: &[(&str, f64)]) -> Vec<C64> {
        let mut v = vec![ZERO; 1 << k];
        for (bits, c) in entries {
            v[usize::from_str_radix(bits, 2).unwrap()] += C64::new(*c, 0.0);
        }
        v
    }

    fn model(p: ModelParams) -> MatrixPair {
        build_model(&p).unwrap()
    }

    #[test]
    fn model_b_null_space() {
        let g = 0.3;
        let p = model(ModelParams::B { g, c: 1.7, epsilon: 1 });
        let b = null_space_basis(&p, 2, 1e-10).unwrap();
        assert_eq!(b.dim(), 2);
        let e1 = ket(2, &[("00", -0.5 * (1.0 + g)), ("01", 1.0), ("11", 0.5 * (g - 1.0))]);
        let e2 = ket(2, &[("11", -0.5 * (1.0 + g)), ("10", 1.0), ("00", 0.5 * (g - 1.0))]);
        assert!(b.span_residual(&e1) < 1e-9);
        assert!(b.span_residual(&e2) < 1e-9);
        assert_eq!(interaction_range(&p, 6).unwrap(), Some(2));
    }

    #[test]
    fn model_a_null_space() {
        let theta = PI / 2.0;
        let u = (1.0 + theta.cos()) / 2.0;
        let p = model(ModelParams::A { g: 1.0, theta, epsilon: 1 });
        assert_eq!(null_space_basis(&p, 2, 1e-10).unwrap().dim(), 0);
        let b = null_space_basis(&p, 3, 1e-10).unwrap();
        assert_eq!(b.dim(), 4);
        // Vectors with the amplitude on |010⟩ paired to |000⟩.
        for v in [
            ket(3, &[("000", -u), ("010", 1.0)]),
            ket(3, &[("001", 1.0), ("011", -1.0)]),
            ket(3, &[("100", 1.0), ("110", -1.0)]),
            ket(3, &[("101", 1.0), ("111", -u)]),
        ] {
            assert!(b.span_residual(&v) < 1e-9);
        }
        assert_eq!(interaction_range(&p, 6).unwrap(), Some(3));
    }

    #[test]
    fn model_c_null_space() {
        let p = model(ModelParams::C { g: 1.0, u: 1.0, epsilon: 1 });
        let b = null_space_basis(&p, 3, 1e-10).unwrap();
        assert_eq!(b.dim(), 4);
        let s = 2.0;
        let vs = [
            ket(3, &[("001", 1.0), ("110", 1.0), ("011", -1.0), ("100", -1.0)]),
            ket(3, &[
                ("000", s), ("111", s), ("001", 1.0), ("011", 1.0), ("100", 1.0), ("110", 1.0),
                ("010", -3.0), ("101", -3.0),
            ]),
            ket(3, &[("000", 2.0), ("111", -2.0), ("001", -3.0), ("011", 3.0), ("100", -3.0), ("110", 3.0)]),
            ket(3, &[("010", 2.0), ("101", -2.0), ("001", -s), ("011", s), ("100", -s), ("110", s)]),
        ];
        for v in vs {
            assert!(b.span_residual(&v) < 1e-9);
        }
        assert_eq!(interaction_range(&p, 6).unwrap(), Some(3));
    }

    #[test]
    fn actions_on_indices() {
        assert_eq!(Action::SpinFlip.apply_index(0b001, 3), 0b110);
        assert_eq!(Action::Reversal.apply_index(0b001, 3), 0b100);
        assert_eq!(Action::Reversal.apply_index(0b0110, 4), 0b0110);
        assert_eq!(Action::Reversal.apply_index(0b0010, 4), 0b0100);
    }

    #[test]
    fn orbit_structures() {
        let a = parent_hamiltonian(&model(ModelParams::A { g: 1.0, theta: 1.1, epsilon: 1 }), 6).unwrap();
        assert_eq!(a.orbits.sizes(), vec![2, 2]);
        let b = parent_hamiltonian(&model(ModelParams::B { g: 0.3, c: 1.7, epsilon: 1 }), 6).unwrap();
        assert_eq!(b.orbits.sizes(), vec![2]);
        let c = parent_hamiltonian(&model(ModelParams::C { g: 1.0, u: 1.0, epsilon: 1 }), 6).unwrap();
        assert_eq!(c.orbits.sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn orbit_closure_failure() {
        // Reversal is not a symmetry of generic Model B.
        let p = model(ModelParams::B { g: 0.3, c: 1.7, epsilon: 1 });
        let b = null_space_basis(&p, 2, 1e-10).unwrap();
        assert!(matches!(symmetry_orbits(&b, &[Action::Reversal]), Err(Error::NotClosed(_))));
    }

    #[test]
    fn local_h_spectrum_and_kernel() {
        let p = model(ModelParams::C { g: 1.0, u: 1.0, epsilon: 1 });
        let basis = null_space_basis(&p, 3, 1e-10).unwrap();
        let orbits = symmetry_orbits(&basis, &[Action::SpinFlip, Action::Reversal]).unwrap();
        let h = local_hamiltonian(&orbits, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let ev = eigvalsh(&h.dense).unwrap();
        let want = [0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{ev:?}");
        }
        assert!(local_hamiltonian(&orbits, &[1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(local_hamiltonian(&orbits, &[1.0]).is_err());

        let pb = model(ModelParams::B { g: 0.3, c: 1.7, epsilon: 1 });
        let ph = parent_hamiltonian(&pb, 6).unwrap();
        let rho = reduced_density_matrix(&pb, 2, 8).unwrap();
        let t: C64 = (&ph.local.dense * &rho).trace();
        assert!(t.norm() < 1e-9);
    }

    #[test]
    fn null_vectors_lie_in_rdm_kernel() {
        let p = model(ModelParams::A { g: 0.6, theta: 2.2, epsilon: 1 });
        let b = null_space_basis(&p, 3, 1e-10).unwrap();
        let rho = reduced_density_matrix(&p, 3, 9).unwrap();
        for c in &b.vectors {
            let e: Vec<C64> = c.iter().map(|z| z.conj()).collect();
            let r = rho.matvec(&e);
            assert!(norm(&r) < 1e-8);
        }
    }

    #[test]
    fn validation() {
        let p = model(ModelParams::B { g: 0.3, c: 1.0, epsilon: 1 });
        assert!(null_space_basis(&p, 0, 1e-10).is_err());
        assert!(null_space_basis(&p, 13, 1e-10).is_err());
        assert!(interaction_range(&p, 13).is_err());
        assert!(LocalHamiltonian::from_terms(2, vec![ProjectorTerm { ket: vec![ZERO; 3], weight: 1.0 }]).is_err());
    }
}
