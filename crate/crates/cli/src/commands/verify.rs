use std::path::PathBuf;

use clap::Args;
use cmkit::verifier::{theorem_suite, ClauseReport, GridSpec, Spacing, SuiteConfig, Verdict, DEFAULT_MAX_ORDER, DEFAULT_TOL};
use cmkit::Polygamma;
use serde::{Deserialize, Serialize};

use crate::config::{load, pick, pick_list};
use crate::error::{CliError, CliResult};
use crate::output::{csv_table, emit, num, Format, Report};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON file with defaults for any of the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Largest p among the enumerated indices (at most 8)
    #[arg(long)]
    max_index: Option<u32>,
    /// Difference step, repeatable
    #[arg(long)]
    c: Vec<f64>,
    /// Highest derivative order checked
    #[arg(long)]
    max_order: Option<u32>,
    /// Sign tolerance relative to the Leibniz term scale
    #[arg(long)]
    tol: Option<f64>,
    /// Multiplies every threshold before checking
    #[arg(long)]
    s_scale: Option<f64>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Grid spacing: log or linear
    #[arg(long, value_parser = parse_spacing)]
    spacing: Option<Spacing>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path, `-` for standard output
    #[arg(long)]
    out: Option<String>,
}

fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s {
        "log" => Ok(Spacing::Log),
        "linear" => Ok(Spacing::Linear),
        _ => Err(format!("expected log or linear, got {s}")),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    max_index: Option<u32>,
    c: Option<Vec<f64>>,
    max_order: Option<u32>,
    tol: Option<f64>,
    s_scale: Option<f64>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    points: Option<usize>,
    spacing: Option<Spacing>,
    format: Option<Format>,
    out: Option<String>,
}

/// Fully resolved settings; serialized with the same keys the file accepts.
#[derive(Debug, Serialize)]
struct VerifyConfig {
    max_index: u32,
    c: Vec<f64>,
    max_order: u32,
    tol: f64,
    s_scale: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
    spacing: Spacing,
    format: Format,
    out: String,
}

#[derive(Debug, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    inconclusive: usize,
}

pub fn run(args: VerifyArgs) -> CliResult<u8> {
    let file: VerifyFile = load(args.config.as_deref())?;
    let defaults = SuiteConfig::default();
    let cfg = VerifyConfig {
        max_index: pick(args.max_index, file.max_index, defaults.max_index),
        c: pick_list(args.c, file.c, defaults.c_list.clone()),
        max_order: pick(args.max_order, file.max_order, DEFAULT_MAX_ORDER),
        tol: pick(args.tol, file.tol, DEFAULT_TOL),
        s_scale: pick(args.s_scale, file.s_scale, 1.0),
        x_min: pick(args.x_min, file.x_min, defaults.grid.x_min),
        x_max: pick(args.x_max, file.x_max, defaults.grid.x_max),
        points: pick(args.points, file.points, defaults.grid.points),
        spacing: pick(args.spacing, file.spacing, defaults.grid.spacing),
        format: pick(args.format, file.format, Format::Json),
        out: pick(args.out, file.out, "-".into()),
    };
    let suite = SuiteConfig {
        max_index: cfg.max_index,
        c_list: cfg.c.clone(),
        grid: GridSpec { x_min: cfg.x_min, x_max: cfg.x_max, points: cfg.points, spacing: cfg.spacing },
        max_order: cfg.max_order,
        tol: cfg.tol,
        s_scale: cfg.s_scale,
    };
    let reports = theorem_suite(&Polygamma::default(), &suite).map_err(CliError::from_core)?;

    let count = |v: Verdict| reports.iter().filter(|r| r.report.verdict == v).count();
    let summary = Summary {
        total: reports.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        inconclusive: count(Verdict::Inconclusive),
    };
    for r in &reports {
        let p = &r.report.params;
        if let Some(w) = r.report.witness {
            eprintln!(
                "fail: clause {} {} s={} c={}: k={} x={} value={} scale={}",
                r.clause, p.index, p.s, p.c, w.k, w.x, w.value, w.scale
            );
        }
        if let Some(e) = &r.report.error {
            eprintln!("inconclusive: clause {} {} c={}: {e}", r.clause, p.index, p.c);
        }
    }

    let text = match cfg.format {
        Format::Json => Report::new(&cfg, &reports, &summary).to_json()?,
        Format::Csv => csv_table(&["case", "k", "x", "value", "scale", "pass"], cells(&reports, cfg.tol))?,
    };
    emit(&cfg.out, &text)?;
    eprintln!(
        "{} clause checks: {} passed, {} failed, {} inconclusive",
        summary.total, summary.passed, summary.failed, summary.inconclusive
    );
    Ok(if summary.inconclusive > 0 {
        3
    } else if summary.failed > 0 {
        1
    } else {
        0
    })
}

fn cells(reports: &[ClauseReport], tol: f64) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in reports {
        let p = &r.report.params;
        let i = p.index;
        let case = format!("{}:{}-{}-{}-{}:c={}", r.clause, i.p(), i.m(), i.n(), i.q(), p.c);
        for cell in &r.report.cells {
            rows.push(vec![
                case.clone(),
                cell.k.to_string(),
                num(cell.x),
                num(cell.value),
                num(cell.scale),
                cell.passes(tol).to_string(),
            ]);
        }
    }
    rows
}
