use clap::{Args, Subcommand};
use cmkit::family::to_f64;
use cmkit::kernels::{beta_exact, beta_integral, family_kernel, find_root, u_monotonicity, zero_integral_residual};
use cmkit::verifier::{GridSpec, Spacing};
use cmkit::{FamilyIndex, FamilyParams, QuadratureSpec};
use serde::Serialize;

use crate::commands::index;
use crate::error::{CliError, CliResult};
use crate::output::{csv_table, emit, num, Format, Report};

#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// Unique root t0 >= 1 of the kernel polynomial a(t; m, n, c)
    Root(RootArgs),
    /// Monotonicity of u(s; a, c) on (0, 1) in the lemma's direction
    UMonotone(UMonotoneArgs),
    /// Sign of the Laplace kernel g(t) of F(x; s; c)
    GSign(GSignArgs),
    /// Beta-function and zero-integral identities by quadrature
    BetaIdentity(BetaIdentityArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path, `-` for standard output
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
pub struct RootArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    c: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct UMonotoneArgs {
    /// Repeatable; defaults to 0.5, 2 and 10
    #[arg(long)]
    a: Vec<f64>,
    /// Repeatable; defaults to 0.25, 0.5, 2 and 4
    #[arg(long)]
    c: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GSignArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 0.01)]
    t_min: f64,
    #[arg(long, default_value_t = 50.0)]
    t_max: f64,
    #[arg(long, default_value_t = 60)]
    points: usize,
    /// Sign tolerance relative to the kernel's term scale
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BetaIdentityArgs {
    /// Largest p (and largest beta argument) covered
    #[arg(long, default_value_t = 6)]
    max: u32,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn run(cmd: KernelCommand) -> CliResult<u8> {
    match cmd {
        KernelCommand::Root(a) => root(a),
        KernelCommand::UMonotone(a) => u_monotone(a),
        KernelCommand::GSign(a) => g_sign(a),
        KernelCommand::BetaIdentity(a) => beta_identity(a),
    }
}

fn write<C: Serialize, R: Serialize, S: Serialize>(
    output: &OutputArgs,
    config: &C,
    results: &[R],
    summary: S,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult<u8> {
    let text = match output.format {
        Format::Json => Report::new(config, results, summary).to_json()?,
        Format::Csv => csv_table(header, rows)?,
    };
    emit(&output.out, &text)?;
    Ok(0)
}

fn root(a: RootArgs) -> CliResult<u8> {
    let r = find_root(a.m, a.n, a.c).map_err(|e| match e {
        cmkit::Error::Domain(_) => CliError::usage(e),
        other => CliError::from_core(other),
    })?;
    let config = serde_json::json!({ "m": a.m, "n": a.n, "c": a.c });
    let row = vec![num(r.t0), num(r.s0), num(r.bracket.0), num(r.bracket.1), num(r.residual)];
    write(
        &a.output,
        &config,
        &[r],
        serde_json::json!({ "t0": r.t0 }),
        &["t0", "s0", "bracket_lo", "bracket_hi", "residual"],
        [row],
    )
}

#[derive(Debug, Serialize)]
struct UMonotoneRow {
    a: f64,
    c: f64,
    #[serde(flatten)]
    scan: cmkit::kernels::MonotoneScan,
}

fn u_monotone(args: UMonotoneArgs) -> CliResult<u8> {
    let a_list = if args.a.is_empty() { vec![0.5, 2.0, 10.0] } else { args.a.clone() };
    let c_list = if args.c.is_empty() { vec![0.25, 0.5, 2.0, 4.0] } else { args.c.clone() };
    if a_list.iter().chain(&c_list).any(|v| !(*v > 0.0 && v.is_finite())) || args.points < 2 {
        return Err(CliError::Usage("a and c must be positive and points >= 2".into()));
    }
    let rows: Vec<UMonotoneRow> = a_list
        .iter()
        .flat_map(|&a| c_list.iter().map(move |&c| (a, c)))
        .map(|(a, c)| UMonotoneRow { a, c, scan: u_monotonicity(a, c, args.points, args.tol) })
        .collect();
    let all = rows.iter().all(|r| r.scan.pass);
    let config = serde_json::json!({ "a": a_list, "c": c_list, "points": args.points, "tol": args.tol });
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.a),
                num(r.c),
                format!("{:?}", r.scan.direction).to_lowercase(),
                num(r.scan.max_violation),
                r.scan.pass.to_string(),
            ]
        })
        .collect();
    write(
        &args.output,
        &config,
        &rows,
        serde_json::json!({ "all_monotone": all }),
        &["a", "c", "direction", "max_violation", "pass"],
        csv_rows,
    )
}

#[derive(Debug, Serialize)]
struct GRow {
    t: f64,
    value: f64,
    scale: f64,
}

fn g_sign(args: GSignArgs) -> CliResult<u8> {
    let idx = index(args.p, args.m, args.n, args.q)?;
    let params = FamilyParams::new(idx, args.s, args.c).map_err(CliError::usage)?;
    if args.c <= 0.0 {
        return Err(CliError::Usage("g-sign needs c > 0".into()));
    }
    let grid = GridSpec { x_min: args.t_min, x_max: args.t_max, points: args.points, spacing: Spacing::Log };
    grid.validate().map_err(CliError::usage)?;
    let spec = QuadratureSpec::default();
    let rows = grid
        .points()
        .into_iter()
        .map(|t| {
            let g = family_kernel(&params, t, &spec).map_err(CliError::from_core)?;
            Ok(GRow { t, value: g.value, scale: g.scale })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let nonneg = rows.iter().all(|r| r.value >= -args.tol * r.scale);
    let nonpos = rows.iter().all(|r| r.value <= args.tol * r.scale);
    let verdict = match (nonneg, nonpos) {
        (true, true) => "zero",
        (true, false) => "nonnegative",
        (false, true) => "nonpositive",
        (false, false) => "mixed",
    };
    let config = serde_json::json!({
        "p": idx.p(), "m": idx.m(), "n": idx.n(), "q": idx.q(), "s": args.s, "c": args.c,
        "t_min": args.t_min, "t_max": args.t_max, "points": args.points, "tol": args.tol,
    });
    let csv_rows: Vec<Vec<String>> = rows.iter().map(|r| vec![num(r.t), num(r.value), num(r.scale)]).collect();
    eprintln!("kernel sign: {verdict}");
    write(&args.output, &config, &rows, serde_json::json!({ "verdict": verdict }), &["t", "value", "scale"], csv_rows)
}

#[derive(Debug, Serialize)]
struct IdentityRow {
    identity: &'static str,
    case: String,
    residual: f64,
}

fn beta_identity(args: BetaIdentityArgs) -> CliResult<u8> {
    if !(2..=cmkit::family::MAX_FAMILY_ORDER).contains(&args.max) {
        return Err(CliError::Usage(format!("--max must lie in 2..={}", cmkit::family::MAX_FAMILY_ORDER)));
    }
    let spec = QuadratureSpec::default();
    let mut rows = Vec::new();
    for x in 1..=args.max {
        for y in 1..=args.max {
            let quad = beta_integral(x, y, &spec).map_err(CliError::from_core)?;
            rows.push(IdentityRow { identity: "beta", case: format!("B({x},{y})"), residual: quad - to_f64(beta_exact(x, y)) });
        }
    }
    for idx in FamilyIndex::enumerate(args.max) {
        let residual = zero_integral_residual(idx, &spec).map_err(CliError::from_core)?;
        rows.push(IdentityRow { identity: "zero_integral", case: idx.to_string(), residual });
    }
    let max_residual = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    eprintln!("max residual {max_residual:e}");
    let csv_rows: Vec<Vec<String>> = rows.iter().map(|r| vec![r.identity.to_string(), r.case.clone(), num(r.residual)]).collect();
    write(
        &args.output,
        &serde_json::json!({ "max": args.max }),
        &rows,
        serde_json::json!({ "max_residual": max_residual }),
        &["identity", "case", "residual"],
        csv_rows,
    )
}
