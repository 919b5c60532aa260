//! Command-line front end: theorem checks, closed-form cross-checks, field
//! equation residuals and point sampling, all emitting deterministic JSON.
//!
//! Exit codes: 0 = consistent/pass, 1 = inconsistency found, 2 = usage or
//! config error.

#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hspace::curvature::{christoffel, eisenhart_residual_with_mode, DerivativeMode};
use hspace::error::Error;
use hspace::funcspec::FunctionSpec;
use hspace::jets::{compose, Jet2};
use hspace::metrics::{
    eval_metric, metric_inverse, sample_points, CoordBox, FamilyConfig, MisprintPolicy,
};
use hspace::verdict::{
    crosscheck, run_verification, to_fixed_json, Tolerances, VerifyOptions, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "hspace",
    version,
    about = "Constant-curvature verification for six-dimensional h-space metric families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MisprintMode {
    /// Per-spot readings confirmed by the brute-force cross-checks (see MISPRINTS.md).
    Default,
    /// Every ambiguous spot read exactly as printed.
    Literal,
    /// Every ambiguous spot read with its alternative form.
    Alt,
}

impl MisprintMode {
    fn policy(self) -> MisprintPolicy {
        match self {
            MisprintMode::Default => MisprintPolicy::resolved(),
            MisprintMode::Literal => MisprintPolicy::literal(),
            MisprintMode::Alt => MisprintPolicy::alt(),
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Family configuration JSON.
    #[arg(long)]
    config: PathBuf,
    /// Number of sample points.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sampling box: `LO:HI` for all coordinates, or six comma-separated
    /// `LO:HI` entries. Defaults to the family box.
    #[arg(long)]
    r#box: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reading mode for the defective spots of the printed canonical forms.
    #[arg(long, value_enum, default_value_t = MisprintMode::Default)]
    misprint_mode: MisprintMode,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the constant-curvature conditions in both directions.
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Constant-curvature residual tolerance (relative).
        #[arg(long, default_value_t = 1e-8)]
        tol_cc: f64,
        /// Condition-scalar tolerance (relative).
        #[arg(long, default_value_t = 1e-9)]
        tol_cond: f64,
        /// Per-point K agreement tolerance (relative).
        #[arg(long, default_value_t = 1e-9)]
        tol_k: f64,
    },
    /// Compare closed-form predicted components against brute force.
    Crosscheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Component agreement tolerance (relative to the tensor scale).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Field-equation residual for user-supplied (h, φ) polynomial fields.
    Eisenhart {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON spec of the h and φ fields.
        #[arg(long)]
        fields: PathBuf,
        /// Use plain partial derivatives instead of covariant ones.
        #[arg(long)]
        plain_partials: bool,
    },
    /// Emit accepted sample points.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(consistent) => {
            if consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_box(spec: &str) -> Result<CoordBox, Error> {
    let parse_pair = |s: &str| -> Result<(f64, f64), Error> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| {
            Error::InvalidArgument(format!("bad box interval `{s}`, expected LO:HI"))
        })?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad box bound `{lo}`")))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad box bound `{hi}`")))?;
        Ok((lo, hi))
    };
    let parts: Vec<&str> = spec.split(',').collect();
    match parts.len() {
        1 => {
            let p = parse_pair(parts[0])?;
            Ok([p; 6])
        }
        6 => {
            let mut bx = [(0.0, 0.0); 6];
            for (k, part) in parts.iter().enumerate() {
                bx[k] = parse_pair(part)?;
            }
            Ok(bx)
        }
        n => Err(Error::InvalidArgument(format!(
            "box needs 1 or 6 intervals, got {n}"
        ))),
    }
}

fn load_config(common: &CommonArgs) -> Result<(FamilyConfig, Option<CoordBox>), Error> {
    let mut cfg = FamilyConfig::from_path(&common.config)?;
    cfg.misprints = common.misprint_mode.policy();
    cfg.validate()?;
    let bx = common.r#box.as_deref().map(parse_box).transpose()?;
    Ok((cfg, bx))
}

fn emit(common: &CommonArgs, json: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Check {
            common,
            tol_cc,
            tol_cond,
            tol_k,
        } => {
            let (cfg, bx) = load_config(&common)?;
            let opts = VerifyOptions {
                samples: common.samples,
                seed: common.seed,
                bx,
                tol: Tolerances {
                    tol_cond,
                    tol_cc,
                    tol_k,
                },
            };
            let report = run_verification(&cfg, &opts)?;
            let verdict = report.verdict();
            emit(&common, &report.to_json()?)?;
            eprintln!(
                "[{}] conditions_hold={} residual_max={:.3e} K={:.6e} -> {}",
                verdict.family,
                verdict.conditions_hold,
                verdict.numeric_residual,
                verdict.numeric_k,
                report.aggregate.verdict
            );
            Ok(verdict.consistent)
        }
        Command::Crosscheck { common, tol } => {
            let (cfg, bx) = load_config(&common)?;
            let report = crosscheck(&cfg, common.samples, common.seed, bx, tol)?;
            emit(&common, &to_fixed_json(&report)?)?;
            eprintln!(
                "[{}] anchors_max_rel_err={:.3e} sym_max={:.3e} -> {}",
                report.family,
                report.anchors_max_rel_err,
                report.sym_residual_max,
                if report.pass { "pass" } else { "FAIL" }
            );
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            Ok(report.pass)
        }
        Command::Eisenhart {
            common,
            fields,
            plain_partials,
        } => {
            let (cfg, bx) = load_config(&common)?;
            let spec: FieldsSpec = serde_json::from_str(&std::fs::read_to_string(&fields)?)?;
            spec.validate()?;
            let bx = bx.unwrap_or_else(|| cfg.family.default_box());
            let points = sample_points(&cfg, common.samples, common.seed, &bx)?;
            let mode = if plain_partials {
                DerivativeMode::Partial
            } else {
                DerivativeMode::Covariant
            };
            let mut records = Vec::with_capacity(points.len());
            let mut max_residual = 0.0f64;
            for p in &points {
                let m = eval_metric(&cfg, p)?;
                let minv = metric_inverse(&m)?;
                let c = christoffel(&m, &minv);
                let h = spec.h.build(&m, p)?;
                let phi_grad = spec.phi.gradient(p);
                let residual = eisenhart_residual_with_mode(&m, &c, &h, &phi_grad, mode)?;
                max_residual = max_residual.max(residual);
                records.push(EisenhartPoint { x: p.0, residual });
            }
            let report = EisenhartReport {
                schema: SCHEMA_VERSION,
                version: env!("CARGO_PKG_VERSION").into(),
                seed: common.seed,
                samples: common.samples,
                covariant: !plain_partials,
                config: cfg,
                points: records,
                max_residual,
            };
            emit(&common, &to_fixed_json(&report)?)?;
            eprintln!("max residual {max_residual:.6e}");
            Ok(true)
        }
        Command::Sample { common } => {
            let (cfg, bx) = load_config(&common)?;
            let bx = bx.unwrap_or_else(|| cfg.family.default_box());
            let points = sample_points(&cfg, common.samples, common.seed, &bx)?;
            let report = SampleReport {
                schema: SCHEMA_VERSION,
                version: env!("CARGO_PKG_VERSION").into(),
                seed: common.seed,
                samples: common.samples,
                config: cfg,
                points: points.iter().map(|p| p.0).collect(),
            };
            emit(&common, &to_fixed_json(&report)?)?;
            Ok(true)
        }
    }
}

/// User-supplied symmetric field h: either a constant multiple of the metric
/// or a sum of univariate polynomial entries h_ij = Σ p(x^var).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldsSpec {
    h: HSpec,
    phi: PhiSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HSpec {
    #[serde(default)]
    scale_metric: Option<f64>,
    #[serde(default)]
    entries: Option<Vec<HEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HEntry {
    /// 1-based indices of the symmetric entry.
    i: usize,
    j: usize,
    /// 1-based coordinate the polynomial depends on.
    var: usize,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiSpec {
    /// Constant gradient vector…
    #[serde(default)]
    grad: Option<[f64; 6]>,
    /// …or φ = Σₖ pₖ(xᵏ) as six univariate polynomials.
    #[serde(default)]
    polys: Option<Vec<FunctionSpec>>,
}

impl FieldsSpec {
    fn validate(&self) -> Result<(), Error> {
        match (&self.h.scale_metric, &self.h.entries) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(Error::InvalidArgument(
                    "h needs exactly one of `scale_metric` or `entries`".into(),
                ))
            }
            _ => {}
        }
        if let Some(entries) = &self.h.entries {
            for e in entries {
                if !(1..=6).contains(&e.i) || !(1..=6).contains(&e.j) || !(1..=6).contains(&e.var) {
                    return Err(Error::InvalidArgument(
                        "h entry indices must be in 1..=6".into(),
                    ));
                }
                FunctionSpec::new(e.coeffs.clone())?;
            }
        }
        match (&self.phi.grad, &self.phi.polys) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(Error::InvalidArgument(
                    "phi needs exactly one of `grad` or `polys`".into(),
                ))
            }
            (None, Some(polys)) if polys.len() != 6 => {
                return Err(Error::InvalidArgument("phi.polys needs 6 entries".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

impl HSpec {
    fn build(
        &self,
        m: &hspace::metrics::MetricJet,
        p: &hspace::metrics::ChartPoint,
    ) -> Result<[[Jet2; 6]; 6], Error> {
        if let Some(c) = self.scale_metric {
            let mut h = [[Jet2::zero(); 6]; 6];
            for i in 0..6 {
                for j in 0..6 {
                    h[i][j] = m.g[i][j] * c;
                }
            }
            return Ok(h);
        }
        let mut h = [[Jet2::zero(); 6]; 6];
        for e in self.entries.as_ref().unwrap() {
            let f = FunctionSpec::new(e.coeffs.clone())?;
            let jet = compose(&f, Jet2::variable(p.0[e.var - 1], e.var - 1));
            h[e.i - 1][e.j - 1] = h[e.i - 1][e.j - 1] + jet;
            if e.i != e.j {
                h[e.j - 1][e.i - 1] = h[e.j - 1][e.i - 1] + jet;
            }
        }
        Ok(h)
    }
}

impl PhiSpec {
    fn gradient(&self, p: &hspace::metrics::ChartPoint) -> [f64; 6] {
        if let Some(g) = self.grad {
            return g;
        }
        let polys = self.polys.as_ref().unwrap();
        let mut out = [0.0; 6];
        for k in 0..6 {
            out[k] = polys[k].deriv1(p.0[k]);
        }
        out
    }
}

#[derive(Serialize)]
struct EisenhartPoint {
    x: [f64; 6],
    residual: f64,
}

#[derive(Serialize)]
struct EisenhartReport {
    schema: u32,
    version: String,
    seed: u64,
    samples: usize,
    covariant: bool,
    config: FamilyConfig,
    points: Vec<EisenhartPoint>,
    max_residual: f64,
}

#[derive(Serialize)]
struct SampleReport {
    schema: u32,
    version: String,
    seed: u64,
    samples: usize,
    config: FamilyConfig,
    points: Vec<[f64; 6]>,
}
