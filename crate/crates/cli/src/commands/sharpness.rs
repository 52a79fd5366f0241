use std::path::PathBuf;

use clap::Args;
use cmkit::verifier::{sharpness_probe, ProbeConfig, ProbeDirection, SharpnessResult, DEFAULT_TOL};
use cmkit::{Error, Polygamma, ThresholdKind};
use serde::{Deserialize, Serialize};

use crate::commands::{index, required};
use crate::config::{load, pick};
use crate::error::{CliError, CliResult};
use crate::output::{emit, Report};

#[derive(Debug, Args)]
pub struct SharpnessArgs {
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
    c: Option<f64>,
    /// Relative perturbation of the threshold, in [0, 0.5)
    #[arg(long)]
    epsilon: Option<f64>,
    /// above: s = thr (1 + eps), claim F is CM; below: s = thr (1 - eps), claim -F is CM
    #[arg(long, value_parser = parse_direction)]
    direction: Option<ProbeDirection>,
    /// alpha, beta or alpha-over-c; defaults to alpha (q >= 1) or alpha-over-c (q = 0)
    #[arg(long, value_parser = parse_threshold)]
    threshold: Option<ThresholdKind>,
    /// Search range; defaults to [1, 1e6] for q >= 1 and [1e-8, 1] for q = 0
    #[arg(long)]
    x_lo: Option<f64>,
    #[arg(long)]
    x_hi: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Number of log-spaced scan points
    #[arg(long)]
    points: Option<usize>,
    /// Output path, `-` for standard output
    #[arg(long)]
    out: Option<String>,
}

fn parse_direction(s: &str) -> Result<ProbeDirection, String> {
    match s {
        "above" => Ok(ProbeDirection::Above),
        "below" => Ok(ProbeDirection::Below),
        _ => Err(format!("expected above or below, got {s}")),
    }
}

fn parse_threshold(s: &str) -> Result<ThresholdKind, String> {
    match s {
        "alpha" => Ok(ThresholdKind::Alpha),
        "beta" => Ok(ThresholdKind::Beta),
        "alpha-over-c" | "alpha_over_c" => Ok(ThresholdKind::AlphaOverC),
        _ => Err(format!("expected alpha, beta or alpha-over-c, got {s}")),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SharpnessFile {
    p: Option<u32>,
    m: Option<u32>,
    n: Option<u32>,
    q: Option<u32>,
    c: Option<f64>,
    epsilon: Option<f64>,
    direction: Option<ProbeDirection>,
    threshold: Option<ThresholdKind>,
    x_lo: Option<f64>,
    x_hi: Option<f64>,
    tol: Option<f64>,
    points: Option<usize>,
    out: Option<String>,
}

#[derive(Debug, Serialize)]
struct SharpnessConfig {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    c: f64,
    epsilon: f64,
    direction: ProbeDirection,
    threshold: ThresholdKind,
    x_lo: f64,
    x_hi: f64,
    tol: f64,
    points: usize,
    out: String,
}

#[derive(Debug, Serialize)]
struct Summary {
    witness_found: bool,
    searched_range: (f64, f64),
}

pub fn run(args: SharpnessArgs) -> CliResult<u8> {
    let file: SharpnessFile = load(args.config.as_deref())?;
    let idx = index(args.p.or(file.p), args.m.or(file.m), args.n.or(file.n), args.q.or(file.q))?;
    let (threshold, lo, hi) = if idx.q() == 0 {
        (ThresholdKind::AlphaOverC, 1e-8, 1.0)
    } else {
        (ThresholdKind::Alpha, 1.0, 1e6)
    };
    let probe_defaults = ProbeConfig::default();
    let cfg = SharpnessConfig {
        p: idx.p(),
        m: idx.m(),
        n: idx.n(),
        q: idx.q(),
        c: required(args.c.or(file.c), "c")?,
        epsilon: pick(args.epsilon, file.epsilon, 0.02),
        direction: pick(args.direction, file.direction, ProbeDirection::Above),
        threshold: pick(args.threshold, file.threshold, threshold),
        x_lo: pick(args.x_lo, file.x_lo, lo),
        x_hi: pick(args.x_hi, file.x_hi, hi),
        tol: pick(args.tol, file.tol, DEFAULT_TOL),
        points: pick(args.points, file.points, probe_defaults.scan_points),
        out: pick(args.out, file.out, "-".into()),
    };
    // an inapplicable threshold (beta with q = 0, alpha/c with q >= 1) is a flag error
    cfg.threshold.value(idx, cfg.c).map_err(CliError::usage)?;
    let probe = ProbeConfig { tol: cfg.tol, scan_points: cfg.points };
    let engine = Polygamma::default();
    let outcome = sharpness_probe(&engine, idx, cfg.c, cfg.threshold, cfg.direction, cfg.epsilon, (cfg.x_lo, cfg.x_hi), &probe);
    let (results, code): (Vec<SharpnessResult>, u8) = match outcome {
        Ok(w) => {
            eprintln!("witness at x = {:e} with signed value {:e}", w.witness_x, w.witness_value);
            (vec![w], 0)
        }
        Err(Error::NoWitness { lo, hi }) => {
            eprintln!("no witness found in [{lo}, {hi}]");
            (Vec::new(), 1)
        }
        Err(e @ (Error::InvalidConfig(_) | Error::Domain(_))) => return Err(CliError::usage(e)),
        Err(e) => return Err(CliError::from_core(e)),
    };
    let summary = Summary { witness_found: !results.is_empty(), searched_range: (cfg.x_lo, cfg.x_hi) };
    emit(&cfg.out, &Report::new(&cfg, &results, summary).to_json()?)?;
    Ok(code)
}
