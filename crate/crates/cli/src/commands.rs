//! Subcommand bodies: each one resolves the model, calls the library and
//! serializes the result.

use std::path::Path;

use clap::ValueEnum;
use mps2_core::classify::{canonicalize, equivalence_witness, ModelParams};
use mps2_core::ed::{ground_check, mps_to_dense};
use mps2_core::mps::{
    connected_two_point, correlation_length, expectation, transfer_matrix, two_point, Mode, SiteOperator, TwoPointMode,
};
use mps2_core::parent_ham::{
    assemble_chain, compare_with_printed, local_hamiltonian, parent_hamiltonian, pauli_decomposition,
    translation_patterns, PrintedForm,
};
use mps2_core::scan::{analytic_spectrum, detect_crossings, multiset_distance, sweep, AxisSpec, CrossingOptions, ScanGrid};
use mps2_core::symmetry::{find_parity_witness, find_spin_flip_witness, verify_witness, Witness};
use mps2_core::C64;
use serde_json::{json, Value};

use crate::model::{read_pair_file, ModelArgs, Source};
use crate::output::{emit, num, scan_csv, table_csv, to_json};
use crate::{CliError, OutArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn cnum(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn write_json(v: &impl serde::Serialize, out: &OutArgs) -> Result<(), CliError> {
    emit(&to_json(v)?, out.out.as_deref())
}

pub fn build(model: &ModelArgs, out: &OutArgs) -> Result<(), CliError> {
    let pair = model.resolve()?.pair()?;
    write_json(&pair, out)
}

pub fn classify(model: &ModelArgs, tol: f64, out: &OutArgs) -> Result<(), CliError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::validation(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let pair = model.resolve()?.pair()?;
    write_json(&canonicalize(&pair, tol), out)
}

pub fn witness(model: &ModelArgs, out: &OutArgs) -> Result<(), CliError> {
    let pair = model.resolve()?.pair()?;
    let spin = match find_spin_flip_witness(&pair) {
        Some(w) => {
            let r = verify_witness(&pair, &Witness::SpinFlip(w.clone()))?;
            json!({"x": w.x, "epsilon": w.epsilon, "residual": num(r)})
        }
        None => json!("none"),
    };
    let parity = match find_parity_witness(&pair) {
        Some(w) => {
            let r = verify_witness(&pair, &Witness::Parity(w.clone()))?;
            json!({"omega": w.omega, "sigma": w.sigma, "residual": num(r)})
        }
        None => json!("none"),
    };
    write_json(&json!({"spin_flip": spin, "parity": parity}), out)
}

pub fn spectrum(model: &ModelArgs, out: &OutArgs) -> Result<(), CliError> {
    let src = model.resolve()?;
    let pair = src.pair()?;
    let t = transfer_matrix(&pair)?;
    let vals = t.eigenvalues();
    let m1 = vals[1].norm();
    let ratio = if m1 == 0.0 { f64::INFINITY } else { vals[0].norm() / m1 };
    let mut v = json!({
        "eigenvalues": vals.iter().map(|z| cnum(*z)).collect::<Vec<_>>(),
        "moduli": vals.iter().map(|z| num(z.norm())).collect::<Vec<_>>(),
        "ratio": num(ratio),
        "xi": num(correlation_length(&pair, None)?),
        "degenerate": t.degeneracy_of_max > 1,
    });
    if let Some(p @ (ModelParams::B { .. } | ModelParams::C { .. })) = src.params() {
        let ana = analytic_spectrum(&p)?;
        let numeric = [vals[0], vals[1], vals[2], vals[3]];
        v["analytic"] = json!(ana.iter().map(|z| cnum(*z)).collect::<Vec<_>>());
        v["analytic_deviation"] = num(multiset_distance(&numeric, &ana));
    }
    write_json(&v, out)
}

pub fn scan(
    model: &ModelArgs,
    params: &[String],
    report: Option<&Path>,
    kink_factor: f64,
    tie_tol: f64,
    out: &OutArgs,
) -> Result<(), CliError> {
    let axes = params.iter().map(|s| AxisSpec::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    let base = model
        .resolve_with(&names)?
        .params()
        .ok_or_else(|| CliError::validation("scan needs --model A, B or C"))?;
    let grid = ScanGrid::new(base, axes)?;
    let records = sweep(&grid)?;
    let opts = CrossingOptions { kink_factor, tie_tol, ..CrossingOptions::default() };
    let crossings = detect_crossings(&grid, &records, &opts)?;
    emit(&scan_csv(&records)?, out.out.as_deref())?;
    let rep = to_json(&json!({"grid": grid, "options": opts, "crossings": crossings.crossings}))?;
    match report {
        Some(p) => emit(&rep, Some(p)),
        None => {
            eprint!("{rep}");
            Ok(())
        }
    }
}

fn printed_form(name: &str, src: &Source, jk: (f64, f64)) -> Result<PrintedForm, CliError> {
    let theta = match src {
        Source::Params(ModelParams::A { theta, .. }) => Some(*theta),
        Source::Cirac(q) => Some((2.0 * q - 1.0).clamp(-1.0, 1.0).acos()),
        _ => None,
    };
    let unavailable = || CliError::validation(format!("--compare {name} needs parameters this model does not have"));
    match name.to_ascii_lowercase().as_str() {
        "ha" => Ok(PrintedForm::ModelA { theta: theta.ok_or_else(unavailable)?, j: jk.0, k: jk.1 }),
        "hb" => match src {
            Source::Params(ModelParams::B { g, .. }) => Ok(PrintedForm::ModelB { g: *g }),
            _ => Err(unavailable()),
        },
        "cirac" => match src {
            Source::Cirac(q) => Ok(PrintedForm::Cirac { q: *q }),
            _ => theta.map(|t| PrintedForm::Cirac { q: (1.0 + t.cos()) / 2.0 }).ok_or_else(unavailable),
        },
        other => Err(CliError::validation(format!("--compare: unknown form {other:?} (expected ha, hb, cirac)"))),
    }
}

fn default_forms(src: &Source) -> Vec<&'static str> {
    match src {
        Source::Params(ModelParams::A { g, .. }) if (g - 1.0).abs() < 1e-12 => vec!["ha", "cirac"],
        Source::Params(ModelParams::A { .. }) => vec!["ha"],
        Source::Params(ModelParams::B { .. }) => vec!["hb"],
        Source::Cirac(_) => vec!["cirac"],
        _ => vec![],
    }
}

pub fn hamiltonian(
    model: &ModelArgs,
    k_max: usize,
    weights: Option<&[f64]>,
    compare: Option<&[String]>,
    jk: (f64, f64),
    out: &OutArgs,
) -> Result<(), CliError> {
    let src = model.resolve()?;
    let pair = src.pair()?;
    let ph = parent_hamiltonian(&pair, k_max)?;
    let local = match weights {
        Some(w) => local_hamiltonian(&ph.orbits, w)?,
        None => ph.local.clone(),
    };
    let pauli = pauli_decomposition(&local);
    let names: Vec<String> = match compare {
        Some(c) => c.to_vec(),
        None => default_forms(&src).into_iter().map(String::from).collect(),
    };
    let comparisons = names
        .iter()
        .map(|n| compare_with_printed(&ph.orbits, &printed_form(n, &src, jk)?).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let v = json!({
        "k": ph.k,
        "null_basis": ph.basis.vectors,
        "orbit_sizes": ph.orbits.sizes(),
        "actions": ph.orbits.actions,
        "local": local,
        "pauli": pauli,
        "patterns": translation_patterns(&pauli),
        "comparisons": comparisons,
    });
    write_json(&v, out)
}

pub fn verify(
    model: &ModelArgs,
    ns: &[usize],
    k_max: usize,
    lowest: usize,
    state_dir: Option<&Path>,
    out: &OutArgs,
) -> Result<(), CliError> {
    let pair = model.resolve()?.pair()?;
    let ph = parent_hamiltonian(&pair, k_max)?;
    let mut reports = Vec::new();
    let mut pass = true;
    for &n in ns {
        let chain = assemble_chain(&ph.local, n)?;
        let psi = mps_to_dense(&pair, n)?;
        if let Some(dir) = state_dir {
            let path = dir.join(format!("state_n{n}.bin"));
            std::fs::write(&path, psi.to_le_bytes()).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        }
        let r = ground_check(&chain, &[psi], lowest)?;
        let tol = 1e-10 * r.h_norm;
        let rayleigh_ok = r.rayleigh[0].abs() < tol;
        let spectrum_ok = r.lambda_min.map(|l| l >= -tol);
        pass &= rayleigh_ok && spectrum_ok != Some(false);
        reports.push(json!({"n": n, "rayleigh_ok": rayleigh_ok, "lambda_min_ok": spectrum_ok, "report": r}));
    }
    write_json(&json!({"k": ph.k, "pass": pass, "chains": reports}), out)
}

pub fn correlate(
    model: &ModelArgs,
    op: &str,
    r_max: u64,
    n: Option<u64>,
    format: Format,
    out: &OutArgs,
) -> Result<(), CliError> {
    let letter = op.chars().next().filter(|_| op.chars().count() == 1);
    let o = letter
        .and_then(SiteOperator::pauli)
        .ok_or_else(|| CliError::validation(format!("--op must be one of i, x, y, z, got {op:?}")))?;
    let pair = model.resolve()?.pair()?;
    let (one_mode, two_mode) = match n {
        Some(n) => (Mode::Finite { n, site: 1 }, TwoPointMode::Finite { n }),
        None => (Mode::Thermodynamic, TwoPointMode::Thermodynamic),
    };
    let last = n.map_or(r_max, |n| r_max.min(n));
    if last < 2 {
        return Err(CliError::validation(format!("--r-max must be at least 2, got {r_max}")));
    }
    let one = expectation(&pair, &o, one_mode)?;
    let mut rows = Vec::new();
    for r in 2..=last {
        let full = two_point(&pair, &o, r, two_mode)?;
        let conn = connected_two_point(&pair, &o, r, two_mode)?;
        rows.push(vec![r as f64, full.re, full.im, conn.re, conn.im]);
    }
    match format {
        Format::Csv => {
            let header = ["r", "re_two_point", "im_two_point", "re_connected", "im_connected"];
            emit(&table_csv(&header, &rows)?, out.out.as_deref())
        }
        Format::Json => {
            let v = json!({
                "operator": op.to_ascii_uppercase(),
                "chain": n.map_or(json!("infinite"), |n| json!(n)),
                "one_point": cnum(one),
                "xi": num(correlation_length(&pair, Some(&o))?),
                "rows": rows.iter().map(|r| json!({
                    "r": r[0] as u64,
                    "two_point": [num(r[1]), num(r[2])],
                    "connected": [num(r[3]), num(r[4])],
                })).collect::<Vec<_>>(),
            });
            write_json(&v, out)
        }
    }
}

pub fn equivalence(model: &ModelArgs, other: &Path, out: &OutArgs) -> Result<(), CliError> {
    let p1 = model.resolve()?.pair()?;
    let p2 = read_pair_file(other)?;
    match equivalence_witness(&p1, &p2) {
        Some(e) => write_json(&json!({"s": e.s, "mu": cnum(e.mu), "residual": num(e.residual)}), out),
        None => write_json(&json!("none"), out),
    }
}
