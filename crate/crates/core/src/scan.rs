//! Parameter sweeps of the transfer-matrix spectrum, crossing and kink
//! detection, and closed-form spectra of Models B and C.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{build_model, ModelParams};
use crate::mps::transfer_matrix;
use crate::mps::correlation_length_of;
use crate::{Error, Result};

impl ModelParams {
    /// Names of the two continuous parameters of the family.
    pub fn param_names(&self) -> [&'static str; 2] {
        match self {
            ModelParams::A { .. } => ["g", "theta"],
            ModelParams::B { .. } => ["g", "c"],
            ModelParams::C { .. } => ["g", "u"],
        }
    }

    pub fn get_param(&self, name: &str) -> Result<f64> {
        match (*self, name) {
            (ModelParams::A { g, .. } | ModelParams::B { g, .. } | ModelParams::C { g, .. }, "g") => Ok(g),
            (ModelParams::A { theta, .. }, "theta") => Ok(theta),
            (ModelParams::B { c, .. }, "c") => Ok(c),
            (ModelParams::C { u, .. }, "u") => Ok(u),
            _ => Err(Error::InvalidArgument(format!("model {:?} has no parameter {name}", self.tag()))),
        }
    }

    /// Copy with one named parameter replaced.
    pub fn with_param(&self, name: &str, v: f64) -> Result<ModelParams> {
        let mut p = *self;
        match (&mut p, name) {
            (ModelParams::A { g, .. } | ModelParams::B { g, .. } | ModelParams::C { g, .. }, "g") => *g = v,
            (ModelParams::A { theta, .. }, "theta") => *theta = v,
            (ModelParams::B { c, .. }, "c") => *c = v,
            (ModelParams::C { u, .. }, "u") => *u = v,
            _ => return Err(Error::InvalidArgument(format!("model {:?} has no parameter {name}", self.tag()))),
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::NonFinite(format!("range of {name}")));
        }
        if min >= max {
            return Err(Error::InvalidArgument(format!("{name}: min {min} must be below max {max}")));
        }
        if steps < 2 {
            return Err(Error::InvalidArgument(format!("{name}: need at least 2 steps, got {steps}")));
        }
        Ok(AxisSpec { name: name.to_string(), min, max, steps })
    }

    /// Parses `name:min:max:steps`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, steps] = parts[..] else {
            return Err(Error::InvalidArgument(format!("grid spec {s:?} is not name:min:max:steps")));
        };
        let num = |field: &str, v: &str| {
            v.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("grid spec {s:?}: bad {field} {v:?}")))
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("grid spec {s:?}: bad steps {steps:?}")))?;
        AxisSpec::new(name.trim(), num("min", min)?, num("max", max)?, steps)
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }
}

/// One or two swept parameters; the others are taken from `base`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanGrid {
    pub base: ModelParams,
    pub axes: Vec<AxisSpec>,
}

impl ScanGrid {
    pub fn new(base: ModelParams, axes: Vec<AxisSpec>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidArgument(format!("scan needs 1 or 2 axes, got {}", axes.len())));
        }
        for a in &axes {
            base.get_param(&a.name)?;
        }
        if axes.len() == 2 && axes[0].name == axes[1].name {
            return Err(Error::InvalidArgument(format!("axis {} given twice", axes[0].name)));
        }
        Ok(ScanGrid { base, axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameters at flat index `idx` (first axis outermost).
    pub fn point(&self, idx: usize) -> Result<(f64, Option<f64>, ModelParams)> {
        match &self.axes[..] {
            [a] => {
                let x = a.value(idx);
                Ok((x, None, self.base.with_param(&a.name, x)?))
            }
            [a, b] => {
                let (x, y) = (a.value(idx / b.steps), b.value(idx % b.steps));
                Ok((x, Some(y), self.base.with_param(&a.name, x)?.with_param(&b.name, y)?))
            }
            _ => unreachable!("validated in ScanGrid::new"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralRecord {
    pub param1: f64,
    pub param2: Option<f64>,
    /// Sorted by decreasing modulus.
    pub eigenvalues: [C64; 4],
    /// |λ₀|/|λ₁| (infinite when λ₁ = 0).
    pub ratio: f64,
    pub xi: f64,
    pub degenerate: bool,
}

fn spectrum_of(params: &ModelParams) -> Result<([C64; 4], f64, bool)> {
    let t = transfer_matrix(&build_model(params)?)?;
    let ev = t.eigenvalues();
    let vals = [ev[0], ev[1], ev[2], ev[3]];
    let xi = correlation_length_of(&t, None)?;
    Ok((vals, xi, t.degeneracy_of_max > 1))
}

pub fn evaluate(params: &ModelParams, param1: f64, param2: Option<f64>) -> Result<SpectralRecord> {
    let (eigenvalues, xi, degenerate) = spectrum_of(params)?;
    let m1 = eigenvalues[1].norm();
    let ratio = if m1 == 0.0 { f64::INFINITY } else { eigenvalues[0].norm() / m1 };
    Ok(SpectralRecord { param1, param2, eigenvalues, ratio, xi, degenerate })
}

/// Evaluates every grid point (in parallel); output in grid order.
pub fn sweep(grid: &ScanGrid) -> Result<Vec<SpectralRecord>> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x, y, p) = grid.point(i)?;
            evaluate(&p, x, y)
        })
        .collect()
}

/// Closed-form transfer-matrix spectra. Model B:
/// {(1+g)²+(ε+g)², (1−g)²+(ε−g)², 2(1−g²), 2(1−g²)}, which is
/// {2(1+g)², 2(1−g)², 2(1−g²), 2(1−g²)} for ε = 1. Model C with x = ε·u·g:
/// {2, 2−x, 2+x/2 ± ½√(16x+x²)} (principal square root).
pub fn analytic_spectrum(params: &ModelParams) -> Result<[C64; 4]> {
    let r = |x: f64| C64::new(x, 0.0);
    match *params {
        ModelParams::A { .. } => Err(Error::InvalidArgument("no closed-form spectrum for model A".into())),
        ModelParams::B { g, epsilon, .. } => {
            let e = epsilon as f64;
            Ok([
                r((1.0 + g).powi(2) + (e + g).powi(2)),
                r((1.0 - g).powi(2) + (e - g).powi(2)),
                r(2.0 * (1.0 - g * g)),
                r(2.0 * (1.0 - g * g)),
            ])
        }
        ModelParams::C { g, u, epsilon } => {
            let x = epsilon as f64 * u * g;
            let s = r(16.0 * x + x * x).sqrt() * 0.5;
            Ok([r(2.0), r(2.0 - x), r(2.0 + x / 2.0) + s, r(2.0 + x / 2.0) - s])
        }
    }
}

/// Smallest max_i |a_i − b_π(i)| over permutations π of four values.
pub fn multiset_distance(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for p in PERMS.iter() {
        let d = (0..4).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    }
    best
}

const PERMS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossingOptions {
    /// A second difference counts as a kink above this multiple of the median.
    pub kink_factor: f64,
    /// Relative modulus window for ties with the leader.
    pub tie_tol: f64,
    /// Bisection stops at this bracket width.
    pub refine_width: f64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        CrossingOptions { kink_factor: 10.0, tie_tol: 1e-9, refine_width: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    MaxCrossing,
    SecondKink,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub kind: CrossingKind,
    /// Scanned axis.
    pub axis: String,
    /// Fixed coordinate of the line for 2-D grids.
    pub line: Option<(String, f64)>,
    pub bracket: (f64, f64),
    pub refined: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
}

impl CrossingReport {
    pub fn of_kind(&self, kind: CrossingKind) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(move |c| c.kind == kind)
    }
}

/// Assignment of `s` to branches minimizing the summed distance to `pred`.
fn match_to(pred: &[C64; 4], s: &[C64; 4]) -> [C64; 4] {
    let mut best = (f64::INFINITY, PERMS[0]);
    for p in PERMS.iter() {
        let cost: f64 = (0..4).map(|b| (pred[b] - s[p[b]]).norm()).sum();
        if cost < best.0 {
            best = (cost, *p);
        }
    }
    std::array::from_fn(|b| s[best.1[b]])
}

/// Follows four branches across a line by matching each spectrum to the
/// polynomial extrapolation (up to quadratic) of the preceding points.
/// Quadratic prediction keeps both transversal crossings and tangential
/// approaches apart.
fn track(spectra: &[[C64; 4]]) -> Vec<[C64; 4]> {
    let mut out: Vec<[C64; 4]> = Vec::with_capacity(spectra.len());
    for (i, s) in spectra.iter().enumerate() {
        let pred: [C64; 4] = match i {
            0 => {
                out.push(*s);
                continue;
            }
            1 => out[0],
            2 => std::array::from_fn(|b| out[1][b] * 2.0 - out[0][b]),
            _ => std::array::from_fn(|b| out[i - 1][b] * 3.0 - out[i - 2][b] * 3.0 + out[i - 3][b]),
        };
        out.push(match_to(&pred, s));
    }
    out
}

/// Branches whose modulus ties with the largest; None when the tie is not a
/// single branch or a complex-conjugate pair.
fn leader_set(vals: &[C64; 4], tie: f64) -> Option<Vec<usize>> {
    let top = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let set: Vec<usize> = (0..4).filter(|&b| vals[b].norm() >= top * (1.0 - tie)).collect();
    match set.len() {
        1 => Some(set),
        2 if (vals[set[0]] - vals[set[1]].conj()).norm() <= tie * top.max(1.0) && vals[set[0]].im != 0.0 => Some(set),
        _ => None,
    }
}

struct Line<'a> {
    axis: String,
    line: Option<(String, f64)>,
    xs: Vec<f64>,
    records: Vec<&'a SpectralRecord>,
    at: Box<dyn Fn(f64) -> Result<ModelParams> + 'a>,
}

fn lines<'a>(grid: &'a ScanGrid, records: &'a [SpectralRecord]) -> Vec<Line<'a>> {
    match &grid.axes[..] {
        [a] => vec![Line {
            axis: a.name.clone(),
            line: None,
            xs: a.values(),
            records: records.iter().collect(),
            at: Box::new(move |x| grid.base.with_param(&a.name, x)),
        }],
        [a, b] => {
            let mut out = Vec::new();
            for i in 0..a.steps {
                let fixed = a.value(i);
                out.push(Line {
                    axis: b.name.clone(),
                    line: Some((a.name.clone(), fixed)),
                    xs: b.values(),
                    records: (0..b.steps).map(|j| &records[i * b.steps + j]).collect(),
                    at: Box::new(move |y| grid.base.with_param(&a.name, fixed)?.with_param(&b.name, y)),
                });
            }
            for j in 0..b.steps {
                let fixed = b.value(j);
                out.push(Line {
                    axis: a.name.clone(),
                    line: Some((b.name.clone(), fixed)),
                    xs: a.values(),
                    records: (0..a.steps).map(|i| &records[i * b.steps + j]).collect(),
                    at: Box::new(move |x| grid.base.with_param(&b.name, fixed)?.with_param(&a.name, x)),
                });
            }
            out
        }
        _ => vec![],
    }
}

/// Bisects a leader change between branch sets `la` (at xa) and `lb` (at xb).
/// Branch values at each midpoint are matched against the interpolation of
/// the current bracket ends, so the matching error shrinks with the bracket.
fn refine(
    line: &Line,
    (xa, va): (f64, [C64; 4]),
    (xb, vb): (f64, [C64; 4]),
    la: &[usize],
    lb: &[usize],
    opts: &CrossingOptions,
) -> Result<f64> {
    let (mut lo, mut vlo, mut hi, mut vhi) = (xa, va, xb, vb);
    while hi - lo > opts.refine_width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (s, _, _) = spectrum_of(&(line.at)(mid)?)?;
        let pred: [C64; 4] = std::array::from_fn(|b| (vlo[b] + vhi[b]) * 0.5);
        let vmid = match_to(&pred, &s);
        let Some(lead) = leader_set(&vmid, opts.tie_tol) else {
            return Ok(mid);
        };
        if lead.iter().any(|b| la.contains(b)) {
            lo = mid;
            vlo = vmid;
        } else if lead.iter().any(|b| lb.contains(b)) {
            hi = mid;
            vhi = vmid;
        } else {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn line_crossings(line: &Line, opts: &CrossingOptions, out: &mut Vec<Crossing>) -> Result<()> {
    let spectra: Vec<[C64; 4]> = line.records.iter().map(|r| r.eigenvalues).collect();
    let tracked = track(&spectra);
    let mut last: Option<(usize, Vec<usize>)> = None;
    for (i, t) in tracked.iter().enumerate() {
        let Some(set) = leader_set(t, opts.tie_tol) else { continue };
        if let Some((j, prev)) = &last {
            if prev.iter().all(|b| !set.contains(b)) {
                let refined = refine(line, (line.xs[*j], tracked[*j]), (line.xs[i], *t), prev, &set, opts)?;
                out.push(Crossing {
                    kind: CrossingKind::MaxCrossing,
                    axis: line.axis.clone(),
                    line: line.line.clone(),
                    bracket: (line.xs[*j], line.xs[i]),
                    refined,
                });
            }
        }
        last = Some((i, set));
    }

    // Kinks of the second-largest modulus (per-point sorted order).
    let s: Vec<f64> = spectra.iter().map(|v| v[1].norm()).collect();
    let m = s.len();
    if m < 3 {
        return Ok(());
    }
    let d: Vec<f64> = (1..m - 1).map(|i| s[i + 1] - 2.0 * s[i] + s[i - 1]).collect();
    let scale = s.iter().fold(0.0f64, |a, &b| a.max(b));
    let floor = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let thresh = opts.kink_factor * median(&mut d.iter().map(|x| x.abs()).collect::<Vec<_>>()).max(floor);
    let mut flagged = vec![false; m];
    for i in 1..m - 1 {
        flagged[i] = d[i - 1].abs() > thresh;
    }
    // |λ₁| touching zero with a linear slope is a kink even at an endpoint.
    for i in 0..m {
        let lead = spectra[i][0].norm();
        let is_zero = s[i] <= 1e-9 * lead.max(f64::MIN_POSITIVE);
        let left = if i > 0 { Some(s[i - 1]) } else { None };
        let right = if i + 1 < m { Some(s[i + 1]) } else { None };
        let slope_ok = [left, right].iter().flatten().any(|&v| v > thresh);
        if is_zero && slope_ok {
            flagged[i] = true;
        }
    }
    let mut i = 0;
    while i < m {
        if !flagged[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < m && flagged[i + 1] {
            i += 1;
        }
        let end = i;
        // Representative: the zero touch if any, otherwise the largest |d|.
        let rep = (start..=end)
            .find(|&k| s[k] <= 1e-9 * spectra[k][0].norm().max(f64::MIN_POSITIVE))
            .unwrap_or_else(|| {
                (start..=end).max_by(|&a, &b| d[a.clamp(1, m - 2) - 1].abs().total_cmp(&d[b.clamp(1, m - 2) - 1].abs())).unwrap()
            });
        out.push(Crossing {
            kind: CrossingKind::SecondKink,
            axis: line.axis.clone(),
            line: line.line.clone(),
            bracket: (line.xs[start.saturating_sub(1)], line.xs[(end + 1).min(m - 1)]),
            refined: line.xs[rep],
        });
        i += 1;
    }
    Ok(())
}

/// Max-crossings (leader changes of tracked branches, refined by bisection)
/// and kinks of the second-largest modulus. 2-D grids are scanned along
/// both axes.
pub fn detect_crossings(grid: &ScanGrid, records: &[SpectralRecord], opts: &CrossingOptions) -> Result<CrossingReport> {
    if records.len() != grid.len() {
        return Err(Error::Dimension(format!("{} records for a grid of {}", records.len(), grid.len())));
    }
    let mut crossings = Vec::new();
    for line in lines(grid, records) {
        line_crossings(&line, opts, &mut crossings)?;
    }
    Ok(CrossingReport { crossings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn b_grid(steps: usize) -> ScanGrid {
        ScanGrid::new(ModelParams::B { g: 0.0, c: 1.0, epsilon: 1 }, vec![AxisSpec::new("g", -1.0, 1.0, steps).unwrap()])
            .unwrap()
    }

    #[test]
    fn axis_parsing() {
        let a = AxisSpec::parse("g:-1:1:401").unwrap();
        assert_eq!((a.name.as_str(), a.min, a.max, a.steps), ("g", -1.0, 1.0, 401));
        assert_eq!(a.value(200), 0.0);
        assert!(AxisSpec::parse("g:1:-1:5").is_err());
        assert!(AxisSpec::parse("g:0:1:1").is_err());
        assert!(AxisSpec::parse("g:0:1").is_err());
        assert!(ScanGrid::new(ModelParams::B { g: 0.0, c: 1.0, epsilon: 1 }, vec![AxisSpec::parse("u:0:1:3").unwrap()]).is_err());
    }

    #[test]
    fn analytic_examples() {
        let b = analytic_spectrum(&ModelParams::B { g: 0.0, c: 3.0, epsilon: 1 }).unwrap();
        assert!(b.iter().all(|z| (z - C64::new(2.0, 0.0)).norm() == 0.0));
        let c0 = analytic_spectrum(&ModelParams::C { g: 0.0, u: 1.5, epsilon: 1 }).unwrap();
        assert!(c0.iter().all(|z| (z - C64::new(2.0, 0.0)).norm() == 0.0));
        let c = analytic_spectrum(&ModelParams::C { g: 1.0, u: 1.0, epsilon: 1 }).unwrap();
        let r17 = 17f64.sqrt();
        let want = [2.0, 1.0, 2.5 + 0.5 * r17, 2.5 - 0.5 * r17].map(|x| C64::new(x, 0.0));
        assert!(multiset_distance(&c, &want) < 1e-14);
        assert!(analytic_spectrum(&ModelParams::A { g: 1.0, theta: 0.0, epsilon: 1 }).is_err());
    }

    #[test]
    fn analytic_matches_numeric_including_negative_epsilon() {
        for eps in [1i8, -1] {
            for &(g, x) in &[(0.3, 1.7), (-1.2, 0.4), (1.5, -2.0), (0.7, -0.5)] {
                for p in [ModelParams::B { g, c: x, epsilon: eps }, ModelParams::C { g, u: x, epsilon: eps }] {
                    let (num, _, _) = spectrum_of(&p).unwrap();
                    let ana = analytic_spectrum(&p).unwrap();
                    assert!(multiset_distance(&num, &ana) < 1e-9, "{p:?} {num:?} {ana:?}");
                    let tr: C64 = ana.iter().sum();
                    let e = transfer_matrix(&build_model(&p).unwrap()).unwrap().e.trace();
                    assert!((tr - e).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn model_b_crossing_and_kinks() {
        let grid = b_grid(401);
        let rec = sweep(&grid).unwrap();
        let rep = detect_crossings(&grid, &rec, &CrossingOptions::default()).unwrap();
        let maxc: Vec<_> = rep.of_kind(CrossingKind::MaxCrossing).collect();
        assert_eq!(maxc.len(), 1, "{rep:?}");
        assert!(maxc[0].refined.abs() < 1e-5);
        let kinks: Vec<f64> = rep.of_kind(CrossingKind::SecondKink).map(|c| c.refined).collect();
        assert!(kinks.iter().any(|k| (k - 1.0).abs() < 0.01), "{kinks:?}");
        assert!(kinks.iter().any(|k| (k + 1.0).abs() < 0.01), "{kinks:?}");
    }

    #[test]
    fn crossing_is_resolution_stable() {
        // Off-center grid so the crossing is not a grid point.
        let g = |steps| {
            ScanGrid::new(
                ModelParams::B { g: 0.0, c: 1.0, epsilon: 1 },
                vec![AxisSpec::new("g", -0.73, 0.91, steps).unwrap()],
            )
            .unwrap()
        };
        let opts = CrossingOptions::default();
        let mut locs = Vec::new();
        for steps in [41, 81] {
            let grid = g(steps);
            let rep = detect_crossings(&grid, &sweep(&grid).unwrap(), &opts).unwrap();
            let c: Vec<_> = rep.of_kind(CrossingKind::MaxCrossing).collect();
            assert_eq!(c.len(), 1);
            locs.push(c[0].refined);
        }
        assert!((locs[0] - locs[1]).abs() <= opts.refine_width);
        assert!(locs[0].abs() < 1e-6);
    }

    #[test]
    fn model_a_interior_has_no_max_crossing() {
        let grid = ScanGrid::new(
            ModelParams::A { g: 0.5, theta: 0.0, epsilon: 1 },
            vec![AxisSpec::new("theta", -PI + 0.01, PI - 0.01, 629).unwrap()],
        )
        .unwrap();
        let rec = sweep(&grid).unwrap();
        let rep = detect_crossings(&grid, &rec, &CrossingOptions::default()).unwrap();
        assert_eq!(rep.of_kind(CrossingKind::MaxCrossing).count(), 0);
        // The leading pair meets at θ = ±π.
        let edge = evaluate(&ModelParams::A { g: 0.5, theta: PI, epsilon: 1 }, PI, None).unwrap();
        assert!(edge.degenerate && edge.xi.is_infinite());
    }

    #[test]
    fn model_c_plane_crossings_on_axes() {
        let grid = ScanGrid::new(
            ModelParams::C { g: 0.0, u: 0.0, epsilon: 1 },
            vec![AxisSpec::new("u", -2.0, 2.0, 21).unwrap(), AxisSpec::new("g", -2.0, 2.0, 21).unwrap()],
        )
        .unwrap();
        let rec = sweep(&grid).unwrap();
        let rep = detect_crossings(&grid, &rec, &CrossingOptions::default()).unwrap();
        let maxc: Vec<_> = rep.of_kind(CrossingKind::MaxCrossing).collect();
        assert!(!maxc.is_empty());
        for c in &maxc {
            assert!(c.refined.abs() < 0.2 + 1e-12, "{c:?}");
        }
        let on_u = maxc.iter().filter(|c| c.axis == "u").count();
        let on_g = maxc.iter().filter(|c| c.axis == "g").count();
        assert!(on_u > 0 && on_g > 0);
    }

    #[test]
    fn sweep_order_is_row_major() {
        let grid = ScanGrid::new(
            ModelParams::C { g: 0.0, u: 0.0, epsilon: 1 },
            vec![AxisSpec::new("u", 0.0, 1.0, 2).unwrap(), AxisSpec::new("g", 0.0, 2.0, 3).unwrap()],
        )
        .unwrap();
        let rec = sweep(&grid).unwrap();
        let coords: Vec<(f64, f64)> = rec.iter().map(|r| (r.param1, r.param2.unwrap())).collect();
        assert_eq!(coords, vec![(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]);
    }
}
