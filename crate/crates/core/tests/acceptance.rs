//! Acceptance criteria 1 to 11. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr (bypassing the harness capture, so the lines show
//! up in plain `cargo test` output).
//!
//! Two criteria compare against printed closed forms that turn out to be
//! wrong (criteria 3 and 7). Those lines report FAIL with the measured
//! residuals; the test then asserts the corrected statement instead, so the
//! suite stays green only while the discrepancy is exactly the documented one.

use std::f64::consts::PI;
use std::io::Write;

use mps2_core::classify::{build_cirac, build_model, canonicalize, equivalence_witness, ModelParams, Tag, CANONICAL_TOL};
use mps2_core::ed::{degeneracy_count, ground_check, mps_to_dense, state_rank, state_symmetry_check, DenseState};
use mps2_core::mps::{
    connected_two_point, correlation_length, expectation, transfer_matrix, two_point, MatrixPair, Mode, SiteOperator,
    TwoPointMode,
};
use mps2_core::numerics::{eigvals, eigvalsh, CMatrix};
use mps2_core::parent_ham::{
    assemble_chain, compare_with_printed, null_space_basis, parent_hamiltonian, LocalHamiltonian, PrintedForm,
    ProjectorTerm, DEFAULT_K_MAX, FIT_TOL,
};
use mps2_core::scan::{
    analytic_spectrum, detect_crossings, multiset_distance, sweep, AxisSpec, CrossingKind, CrossingOptions, ScanGrid,
};
use mps2_core::symmetry::{find_parity_witness, find_spin_flip_witness, proportional, verify_witness, Witness};
use mps2_core::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n:>2}: {} | {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut err = std::io::stderr().lock();
    let _ = err.write_all(line.as_bytes());
}

fn model(p: ModelParams) -> MatrixPair {
    build_model(&p).unwrap()
}

fn a(g: f64, theta: f64) -> MatrixPair {
    model(ModelParams::A { g, theta, epsilon: 1 })
}

fn b(g: f64, c: f64) -> MatrixPair {
    model(ModelParams::B { g, c, epsilon: 1 })
}

fn c(g: f64, u: f64) -> MatrixPair {
    model(ModelParams::C { g, u, epsilon: 1 })
}

/// Vector on k qubits from (bit string, amplitude) entries.
fn ket(k: usize, entries: &[(&str, f64)]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << k];
    for (bits, amp) in entries {
        v[usize::from_str_radix(bits, 2).unwrap()] += C64::new(*amp, 0.0);
    }
    v
}

fn spectrum4(p: &MatrixPair) -> [C64; 4] {
    let t = transfer_matrix(p).unwrap();
    let e = t.eigenvalues();
    [e[0], e[1], e[2], e[3]]
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    AxisSpec::new("x", lo, hi, n).unwrap().values()
}

#[test]
fn criterion_01_closed_form_spectra() {
    let b_worst = [0.0, 1.0, 3.7]
        .iter()
        .flat_map(|&cc| linspace(-2.0, 2.0, 401).into_iter().map(move |g| (g, cc)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(g, cc)| {
            let p = ModelParams::B { g, c: cc, epsilon: 1 };
            let want = [2.0 * (1.0 + g).powi(2), 2.0 * (1.0 - g).powi(2), 2.0 * (1.0 - g * g), 2.0 * (1.0 - g * g)]
                .map(|x| C64::new(x, 0.0));
            (multiset_distance(&spectrum4(&model(p)), &want), g, cc)
        })
        .reduce(|| (0.0, 0.0, 0.0), |x, y| if y.0 > x.0 { y } else { x });
    let axis = linspace(-2.0, 2.0, 101);
    let c_worst = axis
        .par_iter()
        .flat_map(|&u| axis.par_iter().map(move |&g| (u, g)))
        .map(|(u, g)| {
            let p = ModelParams::C { g, u, epsilon: 1 };
            let num = spectrum4(&model(p));
            let ana = analytic_spectrum(&p).unwrap();
            // Closed form written out independently of the library.
            let x = u * g;
            let s = C64::new(16.0 * x + x * x, 0.0).sqrt() * 0.5;
            let own = [C64::new(2.0, 0.0), C64::new(2.0 - x, 0.0), C64::new(2.0 + x / 2.0, 0.0) + s, C64::new(2.0 + x / 2.0, 0.0) - s];
            assert!(multiset_distance(&ana, &own) < 1e-14);
            (multiset_distance(&num, &own), u, g)
        })
        .reduce(|| (0.0, 0.0, 0.0), |x, y| if y.0 > x.0 { y } else { x });
    let pass = b_worst.0 < 1e-9 && c_worst.0 < 1e-9;
    report(
        1,
        pass,
        &format!(
            "max deviation B {:.2e} (g={:.3}, c={}), C {:.2e} (u={:.2}, g={:.2})",
            b_worst.0, b_worst.1, b_worst.2, c_worst.0, c_worst.1, c_worst.2
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_zero_energy_ground_states() {
    let thetas = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI - 0.1];
    let ag = [0.25, 0.4375, 0.625, 0.8125, 1.0];
    let bg = [-0.8, -0.3, 0.2, 0.6, 1.5];
    let bc = [0.0, 0.5, 1.7, 3.0, -2.0];
    let cv = [-1.5, -0.5, 0.3, 1.0, 2.0];
    let mut params = Vec::new();
    for &g in &ag {
        for &t in &thetas {
            params.push(ModelParams::A { g, theta: t, epsilon: 1 });
        }
    }
    for &g in &bg {
        for &cc in &bc {
            params.push(ModelParams::B { g, c: cc, epsilon: 1 });
        }
    }
    for &u in &cv {
        for &g in &cv {
            params.push(ModelParams::C { g, u, epsilon: 1 });
        }
    }
    let jobs: Vec<(ModelParams, usize, LocalHamiltonian)> = params
        .iter()
        .flat_map(|p| {
            let ph = parent_hamiltonian(&model(*p), DEFAULT_K_MAX).unwrap();
            (ph.k + 1..=10).map(move |n| (*p, n, ph.local.clone())).collect::<Vec<_>>()
        })
        .collect();
    let worst = jobs
        .par_iter()
        .map(|(p, n, local)| {
            let chain = assemble_chain(local, *n).unwrap();
            let psi = mps_to_dense(&model(*p), *n).unwrap();
            let vals = eigvalsh(&chain.dense().unwrap()).unwrap();
            let h_norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let ray = chain.rayleigh(&psi.amplitudes).unwrap() / h_norm;
            let low = -vals[0] / h_norm;
            (ray.max(low), *p, *n)
        })
        .reduce(|| (f64::NEG_INFINITY, params[0], 0), |x, y| if y.0 > x.0 { y } else { x });
    let pass = worst.0 < 1e-10;
    report(
        2,
        pass,
        &format!("{} chains; worst max(rayleigh, -lambda_min)/|H| = {:.2e} at {:?}, n={}", jobs.len(), worst.0, worst.1, worst.2),
    );
    assert!(pass);
}

#[test]
fn criterion_03_null_space_fixtures() {
    let mut ok = true;
    let mut notes = Vec::new();
    // Model A with the printed vectors, and with |010> and |101> exchanged.
    let mut corrected_worst: f64 = 0.0;
    for theta in [PI / 2.0, 1.1, 2.3] {
        let u = (1.0 + theta.cos()) / 2.0;
        let p = a(1.0, theta);
        let d2 = null_space_basis(&p, 2, 1e-10).unwrap().dim();
        let basis = null_space_basis(&p, 3, 1e-10).unwrap();
        ok &= d2 == 0 && basis.dim() == 4;
        let printed = [
            ket(3, &[("000", -u), ("101", 1.0)]),
            ket(3, &[("001", 1.0), ("011", -1.0)]),
            ket(3, &[("100", 1.0), ("110", -1.0)]),
            ket(3, &[("010", 1.0), ("111", -u)]),
        ];
        let res: Vec<f64> = printed.iter().map(|v| basis.span_residual(v)).collect();
        if res.iter().any(|r| *r >= 1e-9) {
            ok = false;
            notes.push(format!("A theta={theta:.3}: printed e^A residuals {:?}", res.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()));
        }
        for v in [ket(3, &[("000", -u), ("010", 1.0)]), ket(3, &[("101", 1.0), ("111", -u)])] {
            corrected_worst = corrected_worst.max(basis.span_residual(&v));
        }
    }
    let g = 0.3;
    let pb = b(g, 1.7);
    let nb = null_space_basis(&pb, 2, 1e-10).unwrap();
    let eb = [
        ket(2, &[("00", -0.5 * (1.0 + g)), ("01", 1.0), ("11", 0.5 * (g - 1.0))]),
        ket(2, &[("11", -0.5 * (1.0 + g)), ("10", 1.0), ("00", 0.5 * (g - 1.0))]),
    ];
    let rb = eb.iter().map(|v| nb.span_residual(v)).fold(0.0f64, f64::max);
    ok &= nb.dim() == 2 && rb < 1e-9;
    notes.push(format!("B dim {} residual {rb:.2e}", nb.dim()));
    let mut rc_worst: f64 = 0.0;
    for (ug_g, ug_u) in [(1.0, 1.0), (0.7, -0.4), (2.0, 1.5)] {
        let s = 1.0 + ug_g * ug_u;
        let nc = null_space_basis(&c(ug_g, ug_u), 3, 1e-10).unwrap();
        ok &= nc.dim() == 4;
        let ec = [
            ket(3, &[("001", 1.0), ("110", 1.0), ("011", -1.0), ("100", -1.0)]),
            ket(3, &[
                ("000", s), ("111", s), ("001", 1.0), ("011", 1.0), ("100", 1.0), ("110", 1.0), ("010", -3.0), ("101", -3.0),
            ]),
            ket(3, &[("000", 2.0), ("111", -2.0), ("001", -3.0), ("011", 3.0), ("100", -3.0), ("110", 3.0)]),
            ket(3, &[("010", 2.0), ("101", -2.0), ("001", -s), ("011", s), ("100", -s), ("110", s)]),
        ];
        rc_worst = rc_worst.max(ec.iter().map(|v| nc.span_residual(v)).fold(0.0, f64::max));
    }
    ok &= rc_worst < 1e-9;
    notes.push(format!("C residual {rc_worst:.2e}"));
    notes.push(format!("A with |010>,|101> exchanged: residual {corrected_worst:.2e}"));
    report(3, ok, &notes.join("; "));
    // Only the printed Model A vectors may fail, and the corrected ones must hold.
    assert!(nb.dim() == 2 && rb < 1e-9 && rc_worst < 1e-9);
    assert!(corrected_worst < 1e-9);
}

#[test]
fn criterion_04_crossing_detection() {
    let opts = CrossingOptions::default();
    let bgrid = ScanGrid::new(ModelParams::B { g: 0.0, c: 1.0, epsilon: 1 }, vec![AxisSpec::new("g", -1.0, 1.0, 401).unwrap()])
        .unwrap();
    let brep = detect_crossings(&bgrid, &sweep(&bgrid).unwrap(), &opts).unwrap();
    let bmax: Vec<f64> = brep.of_kind(CrossingKind::MaxCrossing).map(|c| c.refined).collect();
    let kinks: Vec<f64> = brep.of_kind(CrossingKind::SecondKink).map(|c| c.refined).collect();
    let b_ok = bmax.len() == 1
        && bmax[0].abs() < 1e-5
        && kinks.iter().any(|k| (k - 1.0).abs() < 0.01)
        && kinks.iter().any(|k| (k + 1.0).abs() < 0.01);

    let steps = 41;
    let cgrid = ScanGrid::new(
        ModelParams::C { g: 0.0, u: 0.0, epsilon: 1 },
        vec![AxisSpec::new("u", -2.0, 2.0, steps).unwrap(), AxisSpec::new("g", -2.0, 2.0, steps).unwrap()],
    )
    .unwrap();
    let h = cgrid.axes[0].step();
    let crep = detect_crossings(&cgrid, &sweep(&cgrid).unwrap(), &opts).unwrap();
    let cmax: Vec<_> = crep.of_kind(CrossingKind::MaxCrossing).collect();
    let c_far = cmax.iter().map(|c| c.refined.abs()).fold(0.0f64, f64::max);
    let c_ok = !cmax.is_empty()
        && c_far <= h + 1e-12
        && cmax.iter().any(|c| c.axis == "u")
        && cmax.iter().any(|c| c.axis == "g");

    let agrid = ScanGrid::new(
        ModelParams::A { g: 0.5, theta: 0.0, epsilon: 1 },
        vec![AxisSpec::new("theta", -PI + 0.01, PI - 0.01, 1001).unwrap()],
    )
    .unwrap();
    let arep = detect_crossings(&agrid, &sweep(&agrid).unwrap(), &opts).unwrap();
    let a_count = arep.of_kind(CrossingKind::MaxCrossing).count();

    let pass = b_ok && c_ok && a_count == 0;
    report(
        4,
        pass,
        &format!(
            "B max-crossings {bmax:?}, kinks {kinks:?}; C {} loci, farthest {c_far:.3} from an axis (step {h:.3}); A max-crossings {a_count}",
            cmax.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_correlation_length() {
    let xi_b = correlation_length(&b(0.5, 1.0), None).unwrap();
    let want = 1.0 / 3f64.ln();
    let xi_a = correlation_length(&a(0.5, PI), None).unwrap();

    // Ratio of consecutive connected σ^z correlators against the eigenvalue
    // ratio, on a generic Model A point.
    let p = a(0.6, 1.3);
    let vals = transfer_matrix(&p).unwrap().eigenvalues().to_vec();
    let ratio = vals[1].norm() / vals[0].norm();
    let z = SiteOperator::sigma_z();
    let corr: Vec<f64> =
        (5..=16).map(|r| connected_two_point(&p, &z, r, TwoPointMode::Thermodynamic).unwrap().norm()).collect();
    let worst = corr.windows(2).map(|w| ((w[1] / w[0]) / ratio - 1.0).abs()).fold(0.0f64, f64::max);

    let pass = (xi_b - want).abs() < 1e-9 && xi_a == f64::INFINITY && worst < 0.01;
    report(
        5,
        pass,
        &format!("xi_B(g=0.5) = {xi_b:.12} (want {want:.12}); xi_A(theta=pi) = {xi_a}; correlator ratio off by {:.2e}", worst),
    );
    assert!(pass);
}

#[test]
fn criterion_06_equivalence() {
    let mut worst_res: f64 = 0.0;
    let mut worst_mu: f64 = 0.0;
    let mut found = true;
    for theta in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
        let q = (1.0 + theta.cos()) / 2.0;
        match equivalence_witness(&a(1.0, theta), &build_cirac(q).unwrap()) {
            Some(e) => {
                worst_res = worst_res.max(e.residual);
                worst_mu = worst_mu.max((e.mu - C64::new(2.0, 0.0)).norm());
            }
            None => found = false,
        }
    }
    let tags: Vec<Tag> = [0.25, 0.5, 0.75].iter().map(|&q| canonicalize(&build_cirac(q).unwrap(), CANONICAL_TOL).tag()).collect();
    let pass = found && worst_res < 1e-10 && worst_mu < 1e-10 && tags.iter().all(|t| *t == Tag::A);
    report(6, pass, &format!("witness found {found}, residual {worst_res:.2e}, |mu-2| {worst_mu:.2e}; cirac tags {tags:?}"));
    assert!(pass);
}

#[test]
fn criterion_07_symmetry_witnesses() {
    let mut literal = true;
    let mut notes = Vec::new();

    let (ga, theta) = (0.7, PI / 2.0);
    let pa = a(ga, theta);
    let xa = find_spin_flip_witness(&pa).expect("model A spin flip");
    let (s, co) = theta.sin_cos();
    let printed_xa = CMatrix::real2(s, -s, 1.0 - co, 1.0 + co);
    let printed_xa_res = verify_witness(&pa, &Witness::SpinFlip(mps2_core::symmetry::SpinFlipWitness { x: printed_xa.clone(), epsilon: 1 }))
        .unwrap();
    if !proportional(&xa.x, &printed_xa, 1e-10) {
        literal = false;
        notes.push(format!("printed XA residual {printed_xa_res:.2e}"));
    }
    let xa_res = verify_witness(&pa, &Witness::SpinFlip(xa.clone())).unwrap();
    let oa = find_parity_witness(&pa).expect("model A parity");
    let a_ok = xa_res < 1e-10 && proportional(&oa.omega, &CMatrix::identity(2), 1e-10);

    let (gb, cb) = (0.3, 1.7);
    let pb = b(gb, cb);
    let xb = find_spin_flip_witness(&pb).expect("model B spin flip");
    let printed_xb = CMatrix::real2(2.0 * gb, 0.0, cb, 1.0);
    let printed_xb_res =
        verify_witness(&pb, &Witness::SpinFlip(mps2_core::symmetry::SpinFlipWitness { x: printed_xb.clone(), epsilon: 1 })).unwrap();
    if !proportional(&xb.x, &printed_xb, 1e-10) {
        literal = false;
        notes.push(format!("printed XB residual {printed_xb_res:.2e}"));
    }
    let xb_res = verify_witness(&pb, &Witness::SpinFlip(xb.clone())).unwrap();
    let b_ok = xb_res < 1e-10 && find_parity_witness(&pb).is_none();

    let pc = c(0.8, -0.6);
    let xc = find_spin_flip_witness(&pc).expect("model C spin flip");
    let oc = find_parity_witness(&pc).expect("model C parity");
    let c_res = verify_witness(&pc, &Witness::SpinFlip(xc))
        .unwrap()
        .max(verify_witness(&pc, &Witness::Parity(oc)).unwrap());
    let c_ok = c_res < 1e-10;

    // A witness implies the symmetry of every finite state.
    let sym = |p: &MatrixPair| state_symmetry_check(&mps_to_dense(p, 6).unwrap());
    let (sa, sb, sc) = (sym(&pa), sym(&pb), sym(&pc));
    let dense_ok = sa.spin_flip < 1e-10 && sa.reversal < 1e-10 && sb.spin_flip < 1e-10 && sc.spin_flip < 1e-10 && sc.reversal < 1e-10;
    notes.push(format!(
        "library witnesses: A {xa_res:.1e}, B {xb_res:.1e}, C {c_res:.1e}; n=6 residuals A {:.1e}/{:.1e}, B {:.1e}/{:.1e}, C {:.1e}/{:.1e}",
        sa.spin_flip, sa.reversal, sb.spin_flip, sb.reversal, sc.spin_flip, sc.reversal
    ));
    let pass = literal && a_ok && b_ok && c_ok && dense_ok;
    report(7, pass, &notes.join("; "));
    // The printed XA/XB are not witnesses; everything else must hold.
    assert!(printed_xa_res > 1e-3 && printed_xb_res > 1e-3 || literal);
    assert!(a_ok && b_ok && c_ok && dense_ok);
}

#[test]
fn criterion_08_model_b_degeneracy() {
    let g = 0.3;
    let local = parent_hamiltonian(&b(g, 1.0), DEFAULT_K_MAX).unwrap().local;
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [6, 8] {
        let chain = assemble_chain(&local, n).unwrap();
        let states: Vec<DenseState> = [0.0, 1.0, 2.0, 5.0].iter().map(|&cc| mps_to_dense(&b(g, cc), n).unwrap()).collect();
        let rep = ground_check(&chain, &states, 4).unwrap();
        let worst = rep.rayleigh.iter().fold(0.0f64, |m, r| m.max(r.abs())) / rep.h_norm;
        let dim = degeneracy_count(&chain).unwrap();
        let rank = state_rank(&states, 1e-9);
        ok &= worst < 1e-10 && dim >= rank;
        notes.push(format!("n={n}: rayleigh/|H| {worst:.1e}, ground dim {dim}, state rank {rank}"));
    }
    report(8, ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_09_product_state_limit() {
    let g = 0.4;
    let p = a(g, PI);
    let n = 6;
    let psi = mps_to_dense(&p, n).unwrap();
    let phi_p = [1.0 + g, 1.0 - g];
    let phi_m = [1.0 - g, 1.0 + g];
    let product = |phi: [f64; 2]| -> Vec<C64> {
        (0..1usize << n)
            .map(|x| C64::new((0..n).map(|s| phi[(x >> (n - 1 - s)) & 1]).product::<f64>(), 0.0))
            .collect()
    };
    let (vp, vm) = (product(phi_p), product(phi_m));
    let amp_err = psi.amplitudes.iter().zip(vp.iter().zip(&vm)).map(|(x, (p, m))| (x - p - m).norm()).fold(0.0, f64::max);
    let local = parent_hamiltonian(&p, DEFAULT_K_MAX).unwrap().local;
    let chain = assemble_chain(&local, n).unwrap();
    let branches = [DenseState::new(n, vp).unwrap(), DenseState::new(n, vm).unwrap()];
    let rep = ground_check(&chain, &branches, 4).unwrap();
    let overlaps: Vec<f64> = rep.overlaps.iter().map(|o| o.unwrap()).collect();
    let pass = amp_err < 1e-10 && overlaps.iter().all(|o| (o - 1.0).abs() < 1e-9);
    report(9, pass, &format!("amplitude error {amp_err:.1e}; ground-space overlaps {overlaps:?}; ground dim {:?}", rep.ground_dim));
    assert!(pass);
}

fn random_pair(rng: &mut StdRng) -> MatrixPair {
    let mut m = || CMatrix::from_fn(2, 2, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    MatrixPair::new(m(), m()).unwrap()
}

#[test]
fn criterion_10_oracle_equivalence() {
    let n = 8usize;
    let mut rng = StdRng::seed_from_u64(20);
    let ops: Vec<SiteOperator> = vec![
        SiteOperator::sigma_x(),
        SiteOperator::sigma_y(),
        SiteOperator::sigma_z(),
        SiteOperator::new(CMatrix::from_vec(2, 2, vec![
            C64::new(0.3, 0.0), C64::new(0.2, -0.7), C64::new(0.2, 0.7), C64::new(-1.1, 0.0),
        ]).unwrap())
        .unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_pair(&mut rng);
        let psi = mps_to_dense(&p, n).unwrap().amplitudes;
        let nrm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        // ⟨ψ|O_{s1} O_{s2}|ψ⟩/⟨ψ|ψ⟩ with site 1 the most significant bit.
        let brute = |o: &CMatrix, sites: &[usize]| -> C64 {
            let mut phi = psi.clone();
            for &s in sites {
                let bit = n - s;
                let mut next = vec![C64::new(0.0, 0.0); phi.len()];
                for (x, amp) in phi.iter().enumerate() {
                    let i = (x >> bit) & 1;
                    for j in 0..2 {
                        let y = (x & !(1 << bit)) | (j << bit);
                        next[y] += o[(j, i)] * amp;
                    }
                }
                phi = next;
            }
            psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum::<C64>() / nrm
        };
        for o in &ops {
            for site in [1u64, 4, 8] {
                let lib = expectation(&p, o, Mode::Finite { n: n as u64, site }).unwrap();
                worst = worst.max((lib - brute(o.matrix(), &[site as usize])).norm());
            }
            for r in 2..=n as u64 {
                let lib = two_point(&p, o, r, TwoPointMode::Finite { n: n as u64 }).unwrap();
                worst = worst.max((lib - brute(o.matrix(), &[1, r as usize])).norm());
            }
        }
    }
    let pass = worst < 1e-9;
    report(10, pass, &format!("20 random pairs, n=8: max |transfer - brute force| = {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_11_printed_form_reports() {
    let mut notes = Vec::new();
    let mut ok = true;
    for theta in [PI / 4.0, PI / 2.0, 2.0] {
        let q = (1.0 + theta.cos()) / 2.0;
        let ph = parent_hamiltonian(&a(1.0, theta), DEFAULT_K_MAX).unwrap();
        let rep = compare_with_printed(&ph.orbits, &PrintedForm::Cirac { q }).unwrap();
        let words: Vec<&str> = rep.constructed.iter().filter(|(_, v)| v.abs() > 1e-10).map(|(k, _)| k.as_str()).collect();
        let fits = rep.residual < 1e-8 && !rep.mismatch && words == ["X", "ZXZ", "ZZ"];
        ok &= fits;
        notes.push(format!("ciracH theta={theta:.3}: residual {:.1e}, words {words:?}", rep.residual));
        let ha = compare_with_printed(&ph.orbits, &PrintedForm::ModelA { theta, j: 1.0, k: 1.0 }).unwrap();
        // A mismatch is acceptable as long as it is flagged and quantified.
        ok &= ha.residual.is_finite() && ha.mismatch == (ha.residual > FIT_TOL);
        notes.push(format!("HA theta={theta:.3}: mismatch={} residual {:.2}", ha.mismatch, ha.residual));
    }
    let g = 0.3;
    let pb = parent_hamiltonian(&b(g, 1.0), DEFAULT_K_MAX).unwrap();
    let hb = compare_with_printed(&pb.orbits, &PrintedForm::ModelB { g }).unwrap();
    ok &= hb.residual.is_finite() && hb.mismatch == (hb.residual > FIT_TOL);
    notes.push(format!("HB g={g}: mismatch={} residual {:.2}, missing {:?}", hb.mismatch, hb.residual, hb.missing));

    // The two printed Model B projectors on their own: XX and YY come out opposite.
    let eb = [
        ket(2, &[("00", -0.5 * (1.0 + g)), ("01", 1.0), ("11", 0.5 * (g - 1.0))]),
        ket(2, &[("11", -0.5 * (1.0 + g)), ("10", 1.0), ("00", 0.5 * (g - 1.0))]),
    ];
    let raw = LocalHamiltonian::from_terms(2, eb.iter().map(|v| ProjectorTerm { ket: v.clone(), weight: 1.0 }).collect()).unwrap();
    let d = mps2_core::parent_ham::pauli_decomposition(&raw);
    let (xx, yy) = (d.terms.get("XX").copied().unwrap_or(0.0), d.terms.get("YY").copied().unwrap_or(0.0));
    ok &= xx.abs() > 1e-6 && (xx + yy).abs() < 1e-12;
    notes.push(format!("raw e^B projectors: XX {xx:.4}, YY {yy:.4}"));
    report(11, ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn eigensolver_sanity_for_suite() {
    // The suite relies on the general eigensolver for 4x4 transfer matrices.
    let m = CMatrix::from_real(4, 4, &[2.0, 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
    let mut v = eigvals(&m).unwrap();
    v.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
    assert!((v[0] - C64::new(-1.0, 0.0)).norm() < 1e-12 && (v[3] - C64::new(3.0, 0.0)).norm() < 1e-12);
}
