//! Model selection flags and the matrix-pair file format.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use mps2_core::classify::{build_cirac, build_model, ModelParams};
use mps2_core::mps::MatrixPair;
use mps2_core::numerics::CMatrix;
use mps2_core::C64;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelTag {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
    Cirac,
}

#[derive(Args, Clone, Debug)]
pub struct ModelArgs {
    /// Canonical family (or the q-deformed cirac pair).
    #[arg(long, value_enum)]
    pub model: Option<ModelTag>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub eps: i8,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// JSON file {"a0": [[[re,im],[re,im]],[[re,im],[re,im]]], "a1": ...}.
    #[arg(long, value_name = "PATH")]
    pub pair_file: Option<PathBuf>,
}

/// Where the matrices came from; parameters are kept for reports that use them.
#[derive(Clone, Debug)]
pub enum Source {
    Params(ModelParams),
    Cirac(f64),
    File(MatrixPair),
}

impl Source {
    pub fn pair(&self) -> Result<MatrixPair, CliError> {
        Ok(match self {
            Source::Params(p) => build_model(p)?,
            Source::Cirac(q) => build_cirac(*q)?,
            Source::File(p) => p.clone(),
        })
    }

    pub fn params(&self) -> Option<ModelParams> {
        match self {
            Source::Params(p) => Some(*p),
            _ => None,
        }
    }
}

impl ModelArgs {
    /// Resolves the flags; parameters named in `free` default to 0 (they are
    /// overwritten by a scan).
    pub fn resolve_with(&self, free: &[&str]) -> Result<Source, CliError> {
        match (self.model, &self.pair_file) {
            (Some(_), Some(_)) => Err(CliError::validation("give either --model or --pair-file, not both")),
            (None, None) => Err(CliError::validation("one of --model or --pair-file is required")),
            (None, Some(path)) => {
                let stray = [("g", self.g), ("theta", self.theta), ("c", self.c), ("u", self.u), ("q", self.q)]
                    .into_iter()
                    .find(|(_, v)| v.is_some());
                if let Some((name, _)) = stray {
                    return Err(CliError::validation(format!("--{name} has no effect with --pair-file")));
                }
                Ok(Source::File(read_pair_file(path)?))
            }
            (Some(tag), None) => {
                let need = |name: &str, v: Option<f64>| -> Result<f64, CliError> {
                    match v {
                        Some(x) => Ok(x),
                        None if free.contains(&name) => Ok(0.0),
                        None => Err(CliError::validation(format!("--{name} is required for --model {tag:?}"))),
                    }
                };
                let epsilon = self.eps;
                Ok(match tag {
                    ModelTag::A => Source::Params(ModelParams::A { g: need("g", self.g)?, theta: need("theta", self.theta)?, epsilon }),
                    ModelTag::B => Source::Params(ModelParams::B { g: need("g", self.g)?, c: need("c", self.c)?, epsilon }),
                    ModelTag::C => Source::Params(ModelParams::C { g: need("g", self.g)?, u: need("u", self.u)?, epsilon }),
                    ModelTag::Cirac => Source::Cirac(need("q", self.q)?),
                })
            }
        }
    }

    pub fn resolve(&self) -> Result<Source, CliError> {
        self.resolve_with(&[])
    }
}

pub fn read_pair_file(path: &Path) -> Result<MatrixPair, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("pair file {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("pair file {}: {e}", path.display())))?;
    parse_pair(&v).map_err(|e| CliError::validation(format!("pair file {}: {e}", path.display())))
}

/// Parses the pair format, naming the offending field on error.
pub fn parse_pair(v: &Value) -> Result<MatrixPair, String> {
    let obj = v.as_object().ok_or("top level must be an object with fields a0 and a1")?;
    if let Some(k) = obj.keys().find(|k| *k != "a0" && *k != "a1") {
        return Err(format!("unknown field {k}"));
    }
    let m = |name: &str| -> Result<CMatrix, String> {
        let rows = obj.get(name).ok_or(format!("missing field {name}"))?;
        let rows = rows.as_array().filter(|r| r.len() == 2).ok_or(format!("{name}: expected 2 rows"))?;
        let mut data = Vec::with_capacity(4);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or(format!("{name}[{i}]: expected 2 entries"))?;
            for (j, z) in row.iter().enumerate() {
                let pair = z.as_array().filter(|p| p.len() == 2).ok_or(format!("{name}[{i}][{j}]: expected [re, im]"))?;
                let num = |x: &Value| x.as_f64().ok_or(format!("{name}[{i}][{j}]: entries must be numbers"));
                data.push(C64::new(num(&pair[0])?, num(&pair[1])?));
            }
        }
        CMatrix::from_vec(2, 2, data).map_err(|e| format!("{name}: {e}"))
    };
    MatrixPair::new(m("a0")?, m("a1")?).map_err(|e| e.to_string())
}
