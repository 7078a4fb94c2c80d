use std::fs::File;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use cube_shadows::geometry::{canonical_vertex, criterion_with, norms, shadow, shadow_norm_closed_form};
use cube_shadows::measure::{estimate_with, fit_slope};
use cube_shadows::oracle::{
    enumerate_shadows_with, is_orthogonal_to_some_vertex, OracleConfig, DEFAULT_LIMIT, ORTHO_TOL,
    SKIP_TOL,
};
use cube_shadows::{
    closed_form_max, extremal_result, numerical_max, threshold_dimension, MeasureEstimate,
    Tolerances,
};

use crate::error::CliError;
use crate::input::{parse_dims, parse_range, DirectionArgs};
use crate::record::RunRecord;

pub const LIMIT_ENV: &str = "SHADOWS_ORACLE_LIMIT";

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// `--limit`, else `$SHADOWS_ORACLE_LIMIT`, else the library default.
fn oracle_limit(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(l) = flag {
        return Ok(l);
    }
    match std::env::var(LIMIT_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("{LIMIT_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_LIMIT),
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    direction: DirectionArgs,
    /// Require ‖u‖₁‖u‖∞ ≤ 2 - margin.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    /// Also run the exhaustive orthogonality detector.
    #[arg(long)]
    detect: bool,
    /// Dimension cap for --detect.
    #[arg(long)]
    limit: Option<usize>,
}

pub fn check(args: &CheckArgs) -> Result<RunRecord, CliError> {
    let mut record = RunRecord::new("check");
    let dir = args.direction.resolve(&mut record)?;
    record.param("margin", args.margin);
    let u = &dir.unit;
    let mut crit = criterion_with(u, &Tolerances::with_margin(args.margin));
    if args.detect {
        let limit = oracle_limit(args.limit)?;
        record.param("detect", true).param("limit", limit);
        crit.near_vertex_orthogonal = Some(is_orthogonal_to_some_vertex(u, ORTHO_TOL, limit)?);
    }
    let canonical = shadow(u, &canonical_vertex(u))?;
    record.results = json!({
        "n": u.dim(),
        "input_l2": dir.input_l2,
        "unit_vector": u,
        "norms": norms(u),
        "criterion": crit,
        "canonical_shadow": canonical,
        "closed_form_shadow_norm": shadow_norm_closed_form(u),
    });
    Ok(record)
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    direction: DirectionArgs,
    /// Largest dimension to enumerate (default: $SHADOWS_ORACLE_LIMIT or 28).
    #[arg(long)]
    limit: Option<usize>,
}

pub fn oracle(args: &OracleArgs) -> Result<RunRecord, CliError> {
    let mut record = RunRecord::new("oracle");
    let dir = args.direction.resolve(&mut record)?;
    let limit = oracle_limit(args.limit)?;
    record.param("limit", limit);
    let u = &dir.unit;
    let verdict = enumerate_shadows_with(u, &OracleConfig::with_limit(limit))?;
    let satisfied = criterion_with(u, &Tolerances::default()).satisfied;
    let agreement = if verdict.min_abs_inner_product < SKIP_TOL {
        json!("n/a (degenerate)")
    } else {
        json!(satisfied == verdict.exists_inside)
    };
    record.results = json!({
        "n": u.dim(),
        "input_l2": dir.input_l2,
        "verdict": verdict,
        "criterion_satisfied": satisfied,
        "agreement": agreement,
    });
    Ok(record)
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("dims").required(true).multiple(false))]
pub struct ExtremalArgs {
    /// A single dimension.
    #[arg(long, group = "dims")]
    n: Option<usize>,
    /// Inclusive range of dimensions, `a..b`.
    #[arg(long, group = "dims")]
    scan: Option<String>,
    /// Also run multi-start gradient ascent and report the gap.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn extremal(args: &ExtremalArgs) -> Result<RunRecord, CliError> {
    let mut record = RunRecord::new("extremal");
    let (lo, hi) = match (&args.n, &args.scan) {
        (Some(n), _) => {
            if *n == 0 {
                return Err(CliError::Parse("dimension must be at least 1".into()));
            }
            record.param("n", n);
            (*n, *n)
        }
        (None, Some(s)) => {
            record.param("scan", s);
            parse_range(s)?
        }
        (None, None) => return Err(CliError::Parse("give --n or --scan".into())),
    };
    if args.verify {
        record
            .param("verify", true)
            .param("restarts", args.restarts)
            .param("seed", args.seed);
        record.seed = Some(args.seed);
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        let mut row = to_value(extremal_result(n)?);
        if args.verify {
            let num = numerical_max(n, args.restarts, args.seed)?;
            let gap = num.value - closed_form_max(n)?;
            row["numerical"] = json!({
                "value": num.value,
                "gap": gap,
                "converged_starts": num.converged_starts,
                "total_starts": num.total_starts,
            });
        }
        rows.push(row);
    }
    record.results = json!({
        "rows": rows,
        "threshold_dimension": threshold_dimension(),
    });
    Ok(record)
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Comma-separated dimensions.
    #[arg(long)]
    dims: String,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one CSV row per dimension here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Count a sample as satisfying only when ‖u‖₁‖u‖∞ ≤ 2 - margin.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
}

pub const CSV_HEADER: [&str; 9] = [
    "n",
    "samples",
    "seed",
    "frac_satisfying",
    "mean",
    "median",
    "q05",
    "q95",
    "growth_ratio",
];

fn write_csv(path: &PathBuf, rows: &[MeasureEstimate]) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.samples.to_string(),
            r.seed.to_string(),
            r.frac_satisfying.to_string(),
            r.mean_product.to_string(),
            r.median_product.to_string(),
            r.q05.to_string(),
            r.q95.to_string(),
            r.growth_ratio.map(|g| g.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn measure(args: &MeasureArgs) -> Result<RunRecord, CliError> {
    let mut record = RunRecord::new("measure");
    let dims = parse_dims(&args.dims)?;
    if args.samples == 0 {
        return Err(CliError::Parse("--samples must be positive".into()));
    }
    record
        .param("dims", &dims)
        .param("samples", args.samples)
        .param("margin", args.margin);
    if let Some(out) = &args.out {
        record.param("out", out.display().to_string());
    }
    record.seed = Some(args.seed);
    let tol = Tolerances::with_margin(args.margin);
    let rows = dims
        .iter()
        .map(|&n| estimate_with(n, args.samples, args.seed, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(out) = &args.out {
        write_csv(out, &rows)?;
    }
    record.results = json!({
        "rows": rows,
        "slope": fit_slope(&rows),
    });
    Ok(record)
}
