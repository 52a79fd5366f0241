use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cmkit::family::f_derivative;
use cmkit::{FamilyParams, Polygamma};
use serde::{Deserialize, Serialize};

use crate::commands::{index, required};
use crate::config::{load, pick, pick_list};
use crate::error::{CliError, CliResult};
use crate::output::{csv_table, emit, num, Report};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON file with defaults for any of the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    s: Option<f64>,
    /// Difference step; 0 selects the derivative (limit) family
    #[arg(long)]
    c: Option<f64>,
    /// Evaluation point, repeatable
    #[arg(long)]
    x: Vec<f64>,
    /// Derivative order k
    #[arg(long)]
    deriv: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<EvalFormat>,
    /// Output path, `-` for standard output
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalFormat {
    /// One `x k value scale` record per line
    Text,
    Json,
    Csv,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalFile {
    p: Option<u32>,
    m: Option<u32>,
    n: Option<u32>,
    q: Option<u32>,
    s: Option<f64>,
    c: Option<f64>,
    x: Option<Vec<f64>>,
    deriv: Option<u32>,
    format: Option<EvalFormat>,
    out: Option<String>,
}

#[derive(Debug, Serialize)]
struct EvalConfig {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    s: f64,
    c: f64,
    x: Vec<f64>,
    deriv: u32,
    format: EvalFormat,
    out: String,
}

#[derive(Debug, Serialize)]
struct Record {
    x: f64,
    k: u32,
    value: f64,
    scale: f64,
}

pub fn run(args: EvalArgs) -> CliResult<u8> {
    let file: EvalFile = load(args.config.as_deref())?;
    let idx = index(args.p.or(file.p), args.m.or(file.m), args.n.or(file.n), args.q.or(file.q))?;
    let cfg = EvalConfig {
        p: idx.p(),
        m: idx.m(),
        n: idx.n(),
        q: idx.q(),
        s: required(args.s.or(file.s), "s")?,
        c: required(args.c.or(file.c), "c")?,
        x: pick_list(args.x, file.x, Vec::new()),
        deriv: pick(args.deriv, file.deriv, 0),
        format: pick(args.format, file.format, EvalFormat::Text),
        out: pick(args.out, file.out, "-".into()),
    };
    if cfg.x.is_empty() {
        return Err(CliError::Usage("at least one --x is required".into()));
    }
    let params = FamilyParams::new(idx, cfg.s, cfg.c).map_err(CliError::usage)?;
    let engine = Polygamma::default();
    let records = cfg
        .x
        .iter()
        .map(|&x| {
            let v = f_derivative(&engine, &params, cfg.deriv, x).map_err(CliError::from_core)?;
            Ok(Record { x, k: cfg.deriv, value: v.value, scale: v.scale })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let text = match cfg.format {
        EvalFormat::Text => records
            .iter()
            .map(|r| format!("{} {} {} {}\n", num(r.x), r.k, num(r.value), num(r.scale)))
            .collect(),
        EvalFormat::Json => Report::new(&cfg, &records, serde_json::json!({ "count": records.len() })).to_json()?,
        EvalFormat::Csv => csv_table(
            &["x", "k", "value", "scale"],
            records.iter().map(|r| vec![num(r.x), r.k.to_string(), num(r.value), num(r.scale)]),
        )?,
    };
    emit(&cfg.out, &text)?;
    Ok(0)
}
