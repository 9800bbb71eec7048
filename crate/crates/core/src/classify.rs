//! Reduction of a matrix pair to one of the three canonical families.
//!
//! Model A: A₀ = diag(1+g, 1−g), A₁ = [[ε+g cosθ, g sinθ], [g sinθ, ε−g cosθ]].
//! Model B: B₀ = diag(1+g, 1−g), B₁ = [[ε+g, 0], [c, ε−g]].
//! Model C: C₀ = [[1, 0], [g, 1]], C₁ = [[ε+u, u], [−u, ε−u]].

use num_complex::Complex64 as C64;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::mps::{gauge_transform, MatrixPair};
use crate::numerics::CMatrix;
use crate::symmetry::{intertwiner_space, invariant_check, most_invertible};
use crate::{Error, Result};

/// Default relative tolerance for eigenvalue gaps and vanishing entries.
pub const CANONICAL_TOL: f64 = 1e-8;

/// Canonical family parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum ModelParams {
    A { g: f64, theta: f64, epsilon: i8 },
    B { g: f64, c: f64, epsilon: i8 },
    C { g: f64, u: f64, epsilon: i8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    A,
    B,
    C,
    Degenerate,
}

impl ModelParams {
    pub fn tag(&self) -> Tag {
        match self {
            ModelParams::A { .. } => Tag::A,
            ModelParams::B { .. } => Tag::B,
            ModelParams::C { .. } => Tag::C,
        }
    }

    pub fn epsilon(&self) -> i8 {
        match *self {
            ModelParams::A { epsilon, .. } | ModelParams::B { epsilon, .. } | ModelParams::C { epsilon, .. } => epsilon,
        }
    }
}

/// (U, μ) with μ·U·A_i·U⁻¹ equal to the canonical matrices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gauge {
    pub u: CMatrix,
    pub mu: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    /// None for the degenerate class.
    pub params: Option<ModelParams>,
    /// Maps the source pair (after the role swap and before the transpose,
    /// see below) onto [`CanonicalForm::canonical_pair`].
    pub gauge: Option<Gauge>,
    /// A₀ and A₁ were exchanged before canonicalizing.
    pub roles_swapped: bool,
    /// The pair is similar to the transpose of the Model B representative
    /// (upper- instead of lower-triangular A₁ in the A₀ eigenbasis).
    pub transposed: bool,
    pub notes: Vec<String>,
}

impl CanonicalForm {
    pub fn tag(&self) -> Tag {
        self.params.map_or(Tag::Degenerate, |p| p.tag())
    }

    fn degenerate(note: impl Into<String>) -> Self {
        CanonicalForm { params: None, gauge: None, roles_swapped: false, transposed: false, notes: vec![note.into()] }
    }

    /// The representative the gauge maps onto.
    pub fn canonical_pair(&self) -> Option<MatrixPair> {
        let p = build_model(&self.params?).ok()?;
        Some(if self.transposed { p.transposed() } else { p })
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self.params {
            None => m.serialize_entry("tag", "Degenerate")?,
            Some(ModelParams::A { g, theta, epsilon }) => {
                m.serialize_entry("tag", "A")?;
                m.serialize_entry("g", &g)?;
                m.serialize_entry("theta", &theta)?;
                m.serialize_entry("epsilon", &epsilon)?;
            }
            Some(ModelParams::B { g, c, epsilon }) => {
                m.serialize_entry("tag", "B")?;
                m.serialize_entry("g", &g)?;
                m.serialize_entry("c", &c)?;
                m.serialize_entry("epsilon", &epsilon)?;
            }
            Some(ModelParams::C { g, u, epsilon }) => {
                m.serialize_entry("tag", "C")?;
                m.serialize_entry("g", &g)?;
                m.serialize_entry("u", &u)?;
                m.serialize_entry("epsilon", &epsilon)?;
            }
        }
        m.serialize_entry("gauge", &self.gauge)?;
        m.serialize_entry("roles_swapped", &self.roles_swapped)?;
        m.serialize_entry("transposed", &self.transposed)?;
        m.serialize_entry("notes", &self.notes)?;
        m.end()
    }
}

fn check_eps(eps: i8) -> Result<f64> {
    match eps {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidArgument(format!("epsilon must be +1 or -1, got {eps}"))),
    }
}

fn check_finite(vals: &[(&str, f64)]) -> Result<()> {
    for (name, v) in vals {
        if !v.is_finite() {
            return Err(Error::NonFinite((*name).into()));
        }
    }
    Ok(())
}

/// Canonical matrices for the given family parameters.
pub fn build_model(p: &ModelParams) -> Result<MatrixPair> {
    match *p {
        ModelParams::A { g, theta, epsilon } => {
            let e = check_eps(epsilon)?;
            check_finite(&[("g", g), ("theta", theta)])?;
            let (s, c) = theta.sin_cos();
            MatrixPair::real([1.0 + g, 0.0, 0.0, 1.0 - g], [e + g * c, g * s, g * s, e - g * c])
        }
        ModelParams::B { g, c, epsilon } => {
            let e = check_eps(epsilon)?;
            check_finite(&[("g", g), ("c", c)])?;
            MatrixPair::real([1.0 + g, 0.0, 0.0, 1.0 - g], [e + g, 0.0, c, e - g])
        }
        ModelParams::C { g, u, epsilon } => {
            let e = check_eps(epsilon)?;
            check_finite(&[("g", g), ("u", u)])?;
            MatrixPair::real([1.0, 0.0, g, 1.0], [e + u, u, -u, e - u])
        }
    }
}

/// A'₀ = [[0, 0], [1, 1]], A'₁ = [[1, q], [0, 0]].
pub fn build_cirac(q: f64) -> Result<MatrixPair> {
    check_finite(&[("q", q)])?;
    MatrixPair::real([0.0, 0.0, 1.0, 1.0], [1.0, q, 0.0, 0.0])
}

fn is_scalar(m: &CMatrix, tol: f64) -> bool {
    let t = m.trace() * 0.5;
    m.dist(&CMatrix::identity(2).scale(t)) <= tol * m.norm_fro().max(f64::MIN_POSITIVE)
}

/// |(λ₁ − λ₂)/2|² relative to max|λ|². The squared gap is what rounding
/// perturbs linearly, so thresholds are applied to it directly.
fn squared_gap(m: &CMatrix) -> f64 {
    let t = m.trace();
    let disc = t * t * 0.25 - m.det2();
    let d = disc.sqrt();
    let top = (t * 0.5 + d).norm().max((t * 0.5 - d).norm());
    if top == 0.0 {
        0.0
    } else {
        disc.norm() / (top * top)
    }
}

fn has_distinct_eigenvalues(m: &CMatrix, tol: f64) -> bool {
    squared_gap(m) > tol
}

/// Unit eigenvector of a 2×2 matrix for eigenvalue `lam`.
fn eigvec2(m: &CMatrix, lam: C64) -> Vec<C64> {
    let a = m[(0, 0)] - lam;
    let b = m[(0, 1)];
    let c = m[(1, 0)];
    let d = m[(1, 1)] - lam;
    let v = if a.norm_sqr() + b.norm_sqr() >= c.norm_sqr() + d.norm_sqr() { [b, -a] } else { [d, -c] };
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n == 0.0 {
        return vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    }
    vec![v[0] / n, v[1] / n]
}

fn real_part(z: C64, tol: f64, what: &str) -> std::result::Result<f64, String> {
    if z.im.abs() <= tol * z.norm().max(1.0) {
        Ok(z.re)
    } else {
        Err(format!("complex parameters: {what} = {z} is not real"))
    }
}

/// Assigns the working pair (already trace-normalized so tr B₀ = 2) to a
/// family and its parameters.
fn identify(
    b0: &CMatrix,
    b1: &CMatrix,
    eps: i8,
    distinct: bool,
    tol: f64,
) -> std::result::Result<(ModelParams, bool, Vec<String>), String> {
    let ef = eps as f64;
    let g2 = real_part(C64::new(1.0, 0.0) - b0.det2(), tol, "g^2")?;
    let mut notes = Vec::new();
    if distinct {
        if g2 <= 0.0 {
            return Err(format!("complex parameters: g^2 = {g2} is negative"));
        }
        let g = g2.sqrt();
        let vp = eigvec2(b0, C64::new(1.0 + g, 0.0));
        let vm = eigvec2(b0, C64::new(1.0 - g, 0.0));
        let pm = CMatrix::from_vec(2, 2, vec![vp[0], vm[0], vp[1], vm[1]]).map_err(|e| e.to_string())?;
        let u = pm.inverse().map_err(|e| e.to_string())?;
        let t = &(&u * b1) * &pm;
        let (a, b, c, d) = (t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]);
        let sc = t.norm_fro().max(1.0);
        let bz = b.norm() <= tol * sc;
        let cz = c.norm() <= tol * sc;
        let near = |x: C64, y: f64| (x - C64::new(y, 0.0)).norm() <= 1e-6 * sc;
        let aligned = near(a, ef + g) && near(d, ef - g);
        let anti = near(a, ef - g) && near(d, ef + g);
        match (bz, cz) {
            (false, false) => {
                let cos = real_part((a - d) / (2.0 * g), 1e-6, "cos(theta)")?;
                let sin2 = real_part(b * c / g2, 1e-6, "sin(theta)^2")?;
                if sin2 < -1e-6 || cos.abs() > 1.0 + 1e-6 {
                    return Err("complex parameters: theta is not real".into());
                }
                let theta = cos.clamp(-1.0, 1.0).acos();
                notes.push("theta and -theta are gauge equivalent; reported in [0, pi]".into());
                Ok((ModelParams::A { g, theta, epsilon: eps }, false, notes))
            }
            (true, true) if aligned => {
                notes.push("both diagonal".into());
                Ok((ModelParams::B { g, c: 0.0, epsilon: eps }, false, notes))
            }
            (true, true) if anti => {
                notes.push("both diagonal with anti-aligned eigenvalues: sum of two product states".into());
                Ok((ModelParams::A { g, theta: std::f64::consts::PI, epsilon: eps }, false, notes))
            }
            (true, false) | (false, true) if aligned => {
                notes.push("c is not gauge invariant; c != 0 is reported as c = 1".into());
                // Upper-triangular A₁ is the transposed representative.
                Ok((ModelParams::B { g, c: 1.0, epsilon: eps }, cz, notes))
            }
            (true, false) | (false, true) if anti => {
                Err("triangular A1 with diagonal anti-aligned to A0: no canonical family".into())
            }
            _ => Err("transformed A1 matches no canonical family".into()),
        }
    } else {
        // Jordan branch: B₀ is a non-scalar matrix with double eigenvalue 1.
        let x = real_part((b0 * b1).trace() - 2.0 * ef, tol, "g*u")?;
        let sc = b1.norm_fro().max(1.0);
        if x.abs() > tol * sc {
            let r = x.abs().sqrt();
            notes.push("only the product g*u is gauge invariant; reported with |g| = |u|".into());
            Ok((ModelParams::C { g: x.signum() * r, u: r, epsilon: eps }, false, notes))
        } else {
            notes.push("g*u = 0 with u = 0; g normalized to 1".into());
            Ok((ModelParams::C { g: 1.0, u: 0.0, epsilon: eps }, false, notes))
        }
    }
}

/// Canonicalizes `pair` up to gauge. `tol` is the relative threshold used for
/// eigenvalue gaps and vanishing entries (default [`CANONICAL_TOL`]).
pub fn canonicalize(pair: &MatrixPair, tol: f64) -> CanonicalForm {
    let inv = invariant_check(pair);
    let eps = match (inv.trace_sign, inv.det_ok) {
        (Some(e), true) => e,
        _ => return CanonicalForm::degenerate("invariants violated — no symmetric MPS class"),
    };
    let (a0, a1) = (pair.a0(), pair.a1());
    let s0 = is_scalar(a0, tol);
    let s1 = is_scalar(a1, tol);
    if s0 && s1 {
        return CanonicalForm::degenerate("proportional matrices — product state");
    }
    let swap = if has_distinct_eigenvalues(a0, tol) {
        false
    } else if has_distinct_eigenvalues(a1, tol) {
        true
    } else {
        s0
    };
    // Near the distinct/Jordan boundary the branch decision is fragile, so
    // the other assignments are tried as well; only a verified gauge counts.
    let distinct = |sw: bool| has_distinct_eigenvalues(if sw { a1 } else { a0 }, tol);
    let mut attempts = vec![(swap, distinct(swap)), (swap, !distinct(swap)), (!swap, distinct(!swap)), (!swap, !distinct(!swap))];
    attempts.retain(|&(sw, _)| !(if sw { s1 } else { s0 }));
    let mut first_failure: Option<CanonicalForm> = None;
    for (sw, dist) in attempts {
        match attempt(pair, sw, dist, eps, tol) {
            Ok(f) => return f,
            Err(f) => {
                first_failure.get_or_insert(f);
            }
        }
    }
    first_failure.unwrap_or_else(|| CanonicalForm::degenerate("no admissible role assignment"))
}

fn attempt(pair: &MatrixPair, swap: bool, distinct: bool, eps: i8, tol: f64) -> std::result::Result<CanonicalForm, CanonicalForm> {
    let fail = |note: String| {
        let mut f = CanonicalForm::degenerate(note);
        f.roles_swapped = swap;
        f
    };
    let work = if swap { pair.swapped() } else { pair.clone() };
    let t0 = work.a0().trace();
    if t0.norm() <= tol * work.scale() {
        return Err(CanonicalForm::degenerate("traceless pair: trace normalization impossible"));
    }
    let mu = C64::new(2.0, 0.0) / t0;
    let b0 = work.a0().scale(mu);
    let b1 = work.a1().scale(mu);
    let (params, transposed, mut notes) = identify(&b0, &b1, eps, distinct, tol).map_err(fail)?;
    let target = match build_model(&params) {
        Ok(p) if transposed => p.transposed(),
        Ok(p) => p,
        Err(e) => return Err(CanonicalForm::degenerate(e.to_string())),
    };
    let basis = intertwiner_space(&[(&b0, target.a0()), (&b1, target.a1())], 1e-8);
    let Some(s) = most_invertible(&basis) else {
        return Err(fail(format!(
            "no similarity to the {:?} representative; pair lies outside the canonical families",
            params.tag()
        )));
    };
    let check = gauge_transform(&work, &s, mu).map(|p| p.dist(&target) <= 1e-8 * target.scale().max(1.0));
    if check != Ok(true) {
        return Err(fail("canonical gauge failed verification".into()));
    }
    if swap {
        notes.push("roles of A0 and A1 exchanged".into());
    }
    Ok(CanonicalForm { params: Some(params), gauge: Some(Gauge { u: s, mu }), roles_swapped: swap, transposed, notes })
}

/// Explicit equivalence between two pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equivalence {
    /// S with S·A_i·S⁻¹ = μ·A'_i.
    pub s: CMatrix,
    pub mu: C64,
    pub residual: f64,
}

/// Finds invertible S and μ with S·A_i·S⁻¹ = μ·A'_i for both i. Candidate
/// values of μ come from trace ratios, then from square roots of determinant
/// ratios (both signs).
pub fn equivalence_witness(p1: &MatrixPair, p2: &MatrixPair) -> Option<Equivalence> {
    let tol = 1e-9;
    let s1 = p1.scale();
    let s2 = p2.scale();
    let mut cands: Vec<C64> = Vec::new();
    for i in 0..2 {
        let (t, tp) = (p1.get(i).trace(), p2.get(i).trace());
        if tp.norm() > tol * s2 {
            cands.push(t / tp);
        }
    }
    for i in 0..2 {
        let (d, dp) = (p1.get(i).det2(), p2.get(i).det2());
        if dp.norm() > tol * s2 * s2 {
            let r = (d / dp).sqrt();
            cands.push(r);
            cands.push(-r);
        }
    }
    if cands.is_empty() {
        cands.push(C64::new(s1 / s2, 0.0));
    }
    let mut tried: Vec<C64> = Vec::new();
    for mu in cands {
        if mu.norm() == 0.0 || tried.iter().any(|t| (t - mu).norm() <= 1e-12 * mu.norm()) {
            continue;
        }
        tried.push(mu);
        let t0 = p2.a0().scale(mu);
        let t1 = p2.a1().scale(mu);
        let basis = intertwiner_space(&[(p1.a0(), &t0), (p1.a1(), &t1)], 1e-9);
        if let Some(s) = most_invertible(&basis) {
            let Ok(si) = s.inverse() else { continue };
            let r0 = (&(&s * p1.a0()) * &si).dist(&t0);
            let r1 = (&(&s * p1.a1()) * &si).dist(&t1);
            let residual = r0.max(r1) / s1.max(1.0);
            if residual <= 1e-8 {
                return Some(Equivalence { s, mu, residual });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::proportional;
    use std::f64::consts::PI;

    #[test]
    fn build_examples() {
        let a = build_model(&ModelParams::A { g: 1.0, theta: PI, epsilon: 1 }).unwrap();
        assert!(a.a0().dist(&CMatrix::real2(2.0, 0.0, 0.0, 0.0)) < 1e-15);
        assert!(a.a1().dist(&CMatrix::real2(0.0, 0.0, 0.0, 2.0)) < 1e-15);
        let b = build_model(&ModelParams::B { g: 0.3, c: 1.7, epsilon: 1 }).unwrap();
        assert_eq!(b.a1(), &CMatrix::real2(1.3, 0.0, 1.7, 0.7));
        let c = build_model(&ModelParams::C { g: 1.0, u: 1.0, epsilon: 1 }).unwrap();
        assert_eq!(c.a0(), &CMatrix::real2(1.0, 0.0, 1.0, 1.0));
        assert_eq!(c.a1(), &CMatrix::real2(2.0, 1.0, -1.0, 0.0));
        assert!(build_model(&ModelParams::A { g: 1.0, theta: 0.0, epsilon: 0 }).is_err());
        assert_eq!(build_cirac(0.0).unwrap().a1(), &CMatrix::real2(1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn cirac_is_model_a() {
        let f = canonicalize(&build_cirac(0.5).unwrap(), CANONICAL_TOL);
        match f.params {
            Some(ModelParams::A { g, theta, epsilon }) => {
                assert!((g - 1.0).abs() < 1e-10);
                assert!((theta - PI / 2.0).abs() < 1e-10);
                assert_eq!(epsilon, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_pair_is_degenerate() {
        let f = canonicalize(&MatrixPair::real([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0]).unwrap(), CANONICAL_TOL);
        assert_eq!(f.tag(), Tag::Degenerate);
        assert_eq!(f.notes, vec!["proportional matrices — product state".to_string()]);
    }

    #[test]
    fn invariant_violation_is_degenerate() {
        let f = canonicalize(&MatrixPair::real([1.0, 0.0, 0.0, 2.0], [3.0, 0.0, 0.0, 4.0]).unwrap(), CANONICAL_TOL);
        assert_eq!(f.tag(), Tag::Degenerate);
        assert!(f.notes[0].contains("invariants violated"));
    }

    #[test]
    fn gauge_reproduces_canonical_pair() {
        for p in [
            ModelParams::A { g: 0.6, theta: 2.0, epsilon: -1 },
            ModelParams::B { g: 0.4, c: -2.5, epsilon: 1 },
            ModelParams::C { g: 0.5, u: 2.0, epsilon: 1 },
        ] {
            let pair = build_model(&p).unwrap();
            let f = canonicalize(&pair, CANONICAL_TOL);
            assert_eq!(f.tag(), p.tag());
            let gauge = f.gauge.as_ref().unwrap();
            let mapped = gauge_transform(&pair, &gauge.u, gauge.mu).unwrap();
            assert!(mapped.dist(&f.canonical_pair().unwrap()) < 1e-9);
        }
    }

    #[test]
    fn swapped_jordan_roles() {
        // (I, Jordan) is C with u = 0 after exchanging the matrices.
        let pair = MatrixPair::real([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.7, 1.0]).unwrap();
        let f = canonicalize(&pair, CANONICAL_TOL);
        assert_eq!(f.tag(), Tag::C);
        assert!(f.roles_swapped);
    }

    #[test]
    fn equivalence_examples() {
        for theta in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            let a = build_model(&ModelParams::A { g: 1.0, theta, epsilon: 1 }).unwrap();
            let c = build_cirac((1.0 + theta.cos()) / 2.0).unwrap();
            let e = equivalence_witness(&a, &c).unwrap();
            assert!((e.mu - C64::new(2.0, 0.0)).norm() < 1e-12);
            let want = CMatrix::real2(0.0, (theta / 2.0).cos(), (theta / 2.0).sin(), -(theta / 2.0).cos());
            assert!(proportional(&e.s, &want, 1e-9));
        }
        let b = build_model(&ModelParams::B { g: 0.5, c: 1.0, epsilon: 1 }).unwrap();
        let c = build_model(&ModelParams::C { g: 0.5, u: 1.0, epsilon: 1 }).unwrap();
        assert!(equivalence_witness(&b, &c).is_none());
    }

    #[test]
    fn equivalence_recovers_gauge() {
        let pair = build_model(&ModelParams::A { g: 0.3, theta: 1.0, epsilon: 1 }).unwrap();
        let u = CMatrix::real2(1.0, 2.0, -0.5, 1.5);
        let mu = C64::new(0.0, 2.0);
        let other = gauge_transform(&pair, &u, mu).unwrap();
        let e = equivalence_witness(&pair, &other).unwrap();
        assert!(proportional(&e.s, &u, 1e-9));
        assert!((e.mu - C64::new(1.0, 0.0) / mu).norm() < 1e-12);
    }

    #[test]
    fn serialization_shape() {
        let f = canonicalize(&build_model(&ModelParams::B { g: 0.3, c: 1.7, epsilon: 1 }).unwrap(), CANONICAL_TOL);
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["tag"], "B");
        assert_eq!(v["epsilon"], 1);
        assert!(v["gauge"]["u"].is_array());
        let d = CanonicalForm::degenerate("x");
        assert_eq!(serde_json::to_value(&d).unwrap()["tag"], "Degenerate");
    }
}
