//! Command-line driver for the norm-trace workbench.
//!
//! Every JSON report shares one envelope: `config` echoes the parsed run
//! configuration for replayability, `results` carries the command payload,
//! `violations` lists every failed mathematical assertion (empty on a clean
//! run), and `timing` appears only with `--timing` so that default reports
//! are byte-stable. Exit codes: 0 all checks passed, 1 a violation was
//! found (details in the report), 2 invalid parameters or caps.
//!
//! Worker count never changes report bytes: sampling draws are made
//! sequentially from the seed and parallel folds merge in enumeration
//! order, so `--workers` is deliberately left out of the echoed config.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use normtrace_core::code::{EvalCode, Message, SpectrumMode};
use normtrace_core::conics::HermitianPlane;
use normtrace_core::curve::NormTraceCurve;
use normtrace_core::fields::{split_prime_power, Felt, Tower, DEFAULT_FIELD_CAP};
use normtrace_core::minimal::{self, ClassLabel, Method};
use normtrace_core::unipoly::UniPoly;
use normtrace_core::variety::{self, BoundTheorem, IneqVariant, VarietySpec};
use normtrace_core::DEFAULT_ENUM_CAP;

const COEFF_HELP: &str = "Comma-separated field elements, one hex index each. An element's \
index packs its canonical-basis coordinate vector little-endian in base p, so over a prime \
field the index is just the residue. Example over F_9: 0,1,a";

#[derive(Parser)]
#[command(
    name = "normtrace",
    version,
    about = "Workbench for norm-trace curves, their evaluation codes, and conic surveys",
    long_about = "Workbench for norm-trace curves, their evaluation codes, and conic \
surveys.\n\nField elements on the command line are hex-encoded indices in the canonical \
basis: an index packs the coordinate vector little-endian in base p. JSON reports embed \
the run configuration and are byte-identical for a fixed seed regardless of --workers. \
Exit codes: 0 = all checks passed, 1 = a mathematical assertion failed (violations listed \
in the report), 2 = invalid parameters or caps."
)]
pub struct Cli {
    /// Worker threads for parallel enumeration (default: one per CPU).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Append wall-clock timing to the report (off by default so reports
    /// are byte-stable across runs).
    #[arg(long, global = true)]
    pub timing: bool,

    /// Cap on exhaustive enumeration sizes (messages, projective classes).
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    pub cap: u64,

    /// Cap on field table sizes (the largest field order with full tables).
    #[arg(long, global = true, default_value_t = DEFAULT_FIELD_CAP)]
    pub field_cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the tower tables: moduli, the normal-basis generator α, and
    /// the trace/norm fiber sizes.
    FieldInfo(FieldInfoArgs),
    /// Curve point enumeration.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Evaluation-code reports.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Minimal-codeword oracles and the shape classification.
    #[command(subcommand)]
    Minimal(MinimalCmd),
    /// Variety point counts and the intersection correspondence.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Point-count bound windows checked against exact counts.
    Bounds(BoundsArgs),
    /// Conic classification surveys against the Hermitian curve.
    #[command(subcommand)]
    Conics(ConicsCmd),
}

#[derive(Args)]
pub struct FieldInfoArgs {
    /// Characteristic (prime).
    #[arg(long)]
    pub p: u32,
    /// Base-field degree over the prime field; q = p^m.
    #[arg(long)]
    pub m: u32,
    /// Extension degree of the tower; the big field is F_(q^r).
    #[arg(long)]
    pub r: u32,
}

#[derive(Subcommand)]
pub enum CurveCmd {
    /// Emit the ordered affine point list of N(x) = T(y).
    Points(CurvePointsArgs),
}

#[derive(Args)]
pub struct CurvePointsArgs {
    /// Base field order (prime power).
    #[arg(long)]
    pub q: u32,
    /// Tower degree.
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand)]
pub enum CodeCmd {
    /// Weight spectrum of the code spanned by (y, 1, x, …, x^k).
    Spectrum(SpectrumArgs),
    /// Measured generator rank next to the advertised dimension k + 1.
    Dim(CodeParams),
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: CodeParams,
    #[command(flatten)]
    pub traversal: ModeArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args)]
pub struct CodeParams {
    /// Base field order (prime power).
    #[arg(long)]
    pub q: u32,
    /// Tower degree.
    #[arg(long)]
    pub r: u32,
    /// Top x-power in the function basis; 1 ≤ k < q^(r-1).
    #[arg(long)]
    pub k: u32,
}

#[derive(Args, Clone)]
pub struct ModeArgs {
    /// Traverse every message class or a seeded uniform sample.
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Sample count (sampled mode only).
    #[arg(long)]
    pub samples: Option<u64>,
    /// RNG seed (sampled mode only).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ModeArgs {
    fn resolve(&self) -> Result<SpectrumMode, String> {
        match self.mode {
            ModeArg::Exhaustive => {
                if self.samples.is_some() {
                    return Err("--samples requires --mode sampled".into());
                }
                Ok(SpectrumMode::Exhaustive)
            }
            ModeArg::Sampled => {
                let samples = self
                    .samples
                    .ok_or_else(|| String::from("--mode sampled requires --samples"))?;
                Ok(SpectrumMode::Sampled {
                    samples,
                    seed: self.seed,
                })
            }
        }
    }
}

#[derive(Subcommand)]
pub enum MinimalCmd {
    /// Kernel-decide every scalar message class and list the minimal ones.
    Enumerate(CodeParams),
    /// Predict and oracle-check one message.
    Check(MinimalCheckArgs),
    /// Compare the shape prediction against the kernel oracle per class.
    Compare(MinimalCompareArgs),
}

#[derive(Args)]
pub struct MinimalCheckArgs {
    #[command(flatten)]
    pub params: CodeParams,
    /// Message coordinates (b, a_0, …, a_k), k + 2 entries.
    #[arg(long, help = COEFF_HELP)]
    pub message: String,
}

#[derive(Args)]
pub struct MinimalCompareArgs {
    #[command(flatten)]
    pub params: CodeParams,
    /// Sample this many message classes instead of all of them.
    #[arg(long)]
    pub samples: Option<u64>,
    /// RNG seed (with --samples).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum VarietyCmd {
    /// Exact point count of the support variety for one polynomial.
    Count(VarietyCountArgs),
    /// Seeded random polynomials through the three-route equivalence check.
    Verify(VarietyVerifyArgs),
}

#[derive(Args)]
pub struct VarietyCountArgs {
    /// Base field order (prime power).
    #[arg(long)]
    pub q: u32,
    /// Tower degree.
    #[arg(long)]
    pub r: u32,
    /// Polynomial coefficients (a_0, …, a_k), lowest degree first.
    #[arg(long, help = COEFF_HELP)]
    pub coeffs: String,
}

#[derive(Args)]
pub struct VarietyVerifyArgs {
    #[command(flatten)]
    pub params: CodeParams,
    /// Number of random polynomials to draw.
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub params: CodeParams,
    /// Bound to evaluate: cm (explicit-constant window), lw (caller
    /// constant), general (one-sided count floor).
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    /// Sign reading of the 5d^(13/3) term in the one-sided floor; the
    /// corrected (minus) form is the one asserted.
    #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
    pub variant: VariantArg,
    /// Constant C for --theorem lw.
    #[arg(long)]
    pub lw_c: Option<f64>,
    /// Count the variety of this one polynomial (a_0, …, a_k).
    #[arg(long, help = COEFF_HELP)]
    pub coeffs: Option<String>,
    /// Or draw this many random degree-k polynomials.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum ConicsCmd {
    /// Classify conics over F_(q²) and match Hermitian intersection sizes
    /// against the admissible patterns.
    Survey(ConicsSurveyArgs),
}

#[derive(Args)]
pub struct ConicsSurveyArgs {
    /// Base field order (odd prime power); the plane is over F_(q²).
    #[arg(long)]
    pub q: u32,
    #[command(flatten)]
    pub traversal: ModeArgs,
    /// Also compare the minimality predicate against the kernel oracle
    /// for every surveyed conic (odd q > 7).
    #[arg(long)]
    pub validate_prop53: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Cm,
    Lw,
    General,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed,
    Corrected,
}

/// Echo of the parsed run parameters, embedded in every JSON report.
/// Worker count is excluded on purpose: it never affects report bytes.
#[derive(Serialize, Default)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lw_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validate_prop53: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<&'static str>,
    pub cap: u64,
    pub field_cap: u64,
}

#[derive(Serialize)]
struct Envelope<R: Serialize> {
    config: RunConfig,
    results: R,
    violations: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
}

/// Parse and run; report bytes go to `out`, diagnostics to `err`. Returns
/// the process exit code.
pub fn execute<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    run(cli, out, err)
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match cli.workers {
        Some(n) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool,
                Err(e) => {
                    let _ = writeln!(err, "normtrace: {e}");
                    return 2;
                }
            };
            pool.install(|| dispatch(&cli))
        }
        None => dispatch(&cli),
    };
    match outcome {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "normtrace: {msg}");
            2
        }
    }
}

type CmdResult = Result<(String, i32), String>;

fn dispatch(cli: &Cli) -> CmdResult {
    let started = Instant::now();
    match &cli.command {
        Command::FieldInfo(args) => field_info(cli, args, started),
        Command::Curve(CurveCmd::Points(args)) => curve_points(cli, args, started),
        Command::Code(CodeCmd::Spectrum(args)) => code_spectrum(cli, args, started),
        Command::Code(CodeCmd::Dim(args)) => code_dim(cli, args, started),
        Command::Minimal(MinimalCmd::Enumerate(args)) => minimal_enumerate(cli, args, started),
        Command::Minimal(MinimalCmd::Check(args)) => minimal_check(cli, args, started),
        Command::Minimal(MinimalCmd::Compare(args)) => minimal_compare(cli, args, started),
        Command::Variety(VarietyCmd::Count(args)) => variety_count(cli, args, started),
        Command::Variety(VarietyCmd::Verify(args)) => variety_verify(cli, args, started),
        Command::Bounds(args) => bounds(cli, args, started),
        Command::Conics(ConicsCmd::Survey(args)) => conics_survey(cli, args, started),
    }
}

fn base_config(cli: &Cli, command: &'static str) -> RunConfig {
    RunConfig {
        command,
        cap: cli.cap,
        field_cap: cli.field_cap,
        ..RunConfig::default()
    }
}

fn emit<R: Serialize>(
    cli: &Cli,
    config: RunConfig,
    results: R,
    violations: Vec<serde_json::Value>,
    started: Instant,
) -> CmdResult {
    let code = if violations.is_empty() { 0 } else { 1 };
    let timing = cli.timing.then(|| Timing {
        elapsed_ms: started.elapsed().as_millis(),
    });
    let envelope = Envelope {
        config,
        results,
        violations,
        timing,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok((text, code))
}

fn tower_from_q(q: u32, r: u32, field_cap: u64) -> Result<Arc<Tower>, String> {
    let (p, m) = split_prime_power(q).map_err(|e| e.to_string())?;
    Tower::build(p, m, r, field_cap)
        .map(Arc::new)
        .map_err(|e| e.to_string())
}

fn parse_elements(tower: &Tower, text: &str) -> Result<Vec<Felt>, String> {
    let ext = tower.ext();
    text.split(',')
        .map(|token| {
            let token = token.trim();
            let index = u32::from_str_radix(token, 16)
                .map_err(|e| format!("bad hex element index {token:?}: {e}"))?;
            ext.checked_elt(index).map_err(|e| e.to_string())
        })
        .collect()
}

fn hex_join(coords: &[Felt]) -> String {
    coords
        .iter()
        .map(|c| format!("{:x}", c.index()))
        .collect::<Vec<_>>()
        .join(",")
}

fn mode_name(mode: &SpectrumMode) -> &'static str {
    match mode {
        SpectrumMode::Exhaustive => "exhaustive",
        SpectrumMode::Sampled { .. } => "sampled",
    }
}

fn fill_mode(config: &mut RunConfig, mode: &SpectrumMode) {
    config.mode = Some(mode_name(mode));
    if let SpectrumMode::Sampled { samples, seed } = *mode {
        config.samples = Some(samples);
        config.seed = Some(seed);
    }
}

fn field_info(cli: &Cli, args: &FieldInfoArgs, started: Instant) -> CmdResult {
    let tower =
        Tower::build(args.p, args.m, args.r, cli.field_cap).map_err(|e| e.to_string())?;

    #[derive(Serialize)]
    struct AlphaInfo {
        index: u32,
        coeffs: Vec<u32>,
    }
    #[derive(Serialize)]
    struct FieldInfoResults {
        p: u32,
        m: u32,
        r: u32,
        q: u32,
        ext_order: u32,
        base_modulus: Vec<u32>,
        ext_modulus: Vec<u32>,
        alpha: AlphaInfo,
        normal_basis: Vec<u32>,
        fiber_sizes: normtrace_core::fields::FiberSizes,
        m_row_identity: normtrace_core::fields::MRowIdentityReport,
    }

    let m_row = tower.m_row_identity_check();
    let mut violations = Vec::new();
    if !m_row.pass {
        violations.push(json!({"check": "m-row-identity", "data": m_row}));
    }
    let results = FieldInfoResults {
        p: args.p,
        m: args.m,
        r: args.r,
        q: tower.q(),
        ext_order: tower.ext().order(),
        base_modulus: tower.base().modulus().to_vec(),
        ext_modulus: tower.ext().modulus().to_vec(),
        alpha: AlphaInfo {
            index: tower.alpha().index(),
            coeffs: tower.ext().coeffs(tower.alpha()),
        },
        normal_basis: tower.basis().iter().map(|b| b.index()).collect(),
        fiber_sizes: tower.fiber_sizes(),
        m_row_identity: m_row,
    };
    let mut config = base_config(cli, "field-info");
    config.p = Some(args.p);
    config.m = Some(args.m);
    config.r = Some(args.r);
    emit(cli, config, results, violations, started)
}

fn curve_points(cli: &Cli, args: &CurvePointsArgs, started: Instant) -> CmdResult {
    let tower = tower_from_q(args.q, args.r, cli.field_cap)?;
    let curve = NormTraceCurve::enumerate_affine(tower, cli.cap).map_err(|e| e.to_string())?;

    if args.format == Format::Csv {
        let mut text = String::with_capacity(curve.len() * 8 + 16);
        text.push_str("index,x,y\n");
        for (i, &(x, y)) in curve.points().iter().enumerate() {
            text.push_str(&format!("{i},{},{}\n", x.index(), y.index()));
        }
        return Ok((text, 0));
    }

    #[derive(Serialize)]
    struct PointRow {
        index: usize,
        x: u32,
        y: u32,
    }
    #[derive(Serialize)]
    struct PointsResults {
        q: u32,
        r: u32,
        count: usize,
        points: Vec<PointRow>,
    }
    let results = PointsResults {
        q: args.q,
        r: args.r,
        count: curve.len(),
        points: curve
            .points()
            .iter()
            .enumerate()
            .map(|(index, &(x, y))| PointRow {
                index,
                x: x.index(),
                y: y.index(),
            })
            .collect(),
    };
    let mut config = base_config(cli, "curve points");
    config.q = Some(args.q);
    config.r = Some(args.r);
    config.format = Some("json");
    emit(cli, config, results, Vec::new(), started)
}

fn build_code(params: &CodeParams, cli: &Cli) -> Result<EvalCode, String> {
    let tower = tower_from_q(params.q, params.r, cli.field_cap)?;
    let curve = NormTraceCurve::enumerate_affine(tower, cli.cap).map_err(|e| e.to_string())?;
    EvalCode::build(Arc::new(curve), params.k).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SpectrumRow {
    weight: u64,
    count: u64,
}

fn code_spectrum(cli: &Cli, args: &SpectrumArgs, started: Instant) -> CmdResult {
    let code = build_code(&args.params, cli)?;
    let mode = args.traversal.resolve()?;
    let spectrum = code.weight_spectrum(&mode, cli.cap).map_err(|e| e.to_string())?;
    let rows: Vec<SpectrumRow> = spectrum
        .into_iter()
        .map(|(weight, count)| SpectrumRow { weight, count })
        .collect();

    if args.format == Format::Csv {
        let mut text = String::from("weight,count\n");
        for row in &rows {
            text.push_str(&format!("{},{}\n", row.weight, row.count));
        }
        return Ok((text, 0));
    }

    #[derive(Serialize)]
    struct SpectrumResults {
        q: u32,
        r: u32,
        k: u32,
        length: usize,
        measured_dimension: usize,
        rows: Vec<SpectrumRow>,
    }
    let results = SpectrumResults {
        q: args.params.q,
        r: args.params.r,
        k: args.params.k,
        length: code.n(),
        measured_dimension: code.measured_dimension(),
        rows,
    };
    let mut config = base_config(cli, "code spectrum");
    config.q = Some(args.params.q);
    config.r = Some(args.params.r);
    config.k = Some(args.params.k);
    config.format = Some("json");
    fill_mode(&mut config, &mode);
    emit(cli, config, results, Vec::new(), started)
}

fn code_dim(cli: &Cli, args: &CodeParams, started: Instant) -> CmdResult {
    let code = build_code(args, cli)?;
    let mut config = base_config(cli, "code dim");
    config.q = Some(args.q);
    config.r = Some(args.r);
    config.k = Some(args.k);
    emit(cli, config, code.dimension_audit(), Vec::new(), started)
}

fn minimal_enumerate(cli: &Cli, args: &CodeParams, started: Instant) -> CmdResult {
    let code = build_code(args, cli)?;
    let enumeration =
        minimal::enumerate_minimal(&code, cli.cap).map_err(|e| e.to_string())?;

    #[derive(Serialize)]
    struct EnumerateResults {
        classes_checked: u64,
        minimal_count: usize,
        /// Canonical class representatives (b, a_0, …, a_k), hex indices.
        minimal: Vec<String>,
    }
    let results = EnumerateResults {
        classes_checked: enumeration.classes_checked,
        minimal_count: enumeration.minimal.len(),
        minimal: enumeration
            .minimal
            .iter()
            .map(|m| hex_join(&m.coords()))
            .collect(),
    };
    let mut config = base_config(cli, "minimal enumerate");
    config.q = Some(args.q);
    config.r = Some(args.r);
    config.k = Some(args.k);
    emit(cli, config, results, Vec::new(), started)
}

fn minimal_check(cli: &Cli, args: &MinimalCheckArgs, started: Instant) -> CmdResult {
    let code = build_code(&args.params, cli)?;
    let coords = parse_elements(code.curve().tower(), &args.message)?;
    let msg = code.checked_message(&coords).map_err(|e| e.to_string())?;
    if msg.is_zero() {
        return Err("the zero message has no minimality verdict".into());
    }
    let predicted = minimal::predicted_class(&code, &msg).map_err(|e| e.to_string())?;
    let cw = code.encode(&msg);
    let kernel = minimal::is_minimal(&code, &cw, Method::Kernel).map_err(|e| e.to_string())?;
    let scan = minimal::is_minimal(&code, &cw, Method::Scan).map_err(|e| e.to_string())?;

    let mut violations = Vec::new();
    if kernel.minimal != scan.minimal {
        violations.push(json!({
            "check": "oracle-agreement",
            "data": {"kernel": kernel.minimal, "scan": scan.minimal},
        }));
    }
    let claim = match predicted.label {
        ClassLabel::ClassI | ClassLabel::ClassII | ClassLabel::ClassIII => Some(true),
        ClassLabel::PredictedNonminimal => Some(false),
        ClassLabel::OutsideHypotheses => None,
    };
    if let Some(claim) = claim {
        if claim != kernel.minimal {
            violations.push(json!({
                "check": "prediction",
                "data": {
                    "label": predicted.label,
                    "claims_minimal": claim,
                    "oracle_minimal": kernel.minimal,
                },
            }));
        }
    }

    #[derive(Serialize)]
    struct CheckResults {
        message: String,
        weight: u64,
        predicted: minimal::Prediction,
        kernel: minimal::MinimalityVerdict,
        scan: minimal::MinimalityVerdict,
    }
    let results = CheckResults {
        message: hex_join(&msg.coords()),
        weight: cw.weight(),
        predicted,
        kernel,
        scan,
    };
    let mut config = base_config(cli, "minimal check");
    config.q = Some(args.params.q);
    config.r = Some(args.params.r);
    config.k = Some(args.params.k);
    config.message = Some(args.message.clone());
    emit(cli, config, results, violations, started)
}

fn minimal_compare(cli: &Cli, args: &MinimalCompareArgs, started: Instant) -> CmdResult {
    let code = build_code(&args.params, cli)?;
    let mode = match args.samples {
        Some(samples) => SpectrumMode::Sampled {
            samples,
            seed: args.seed,
        },
        None => SpectrumMode::Exhaustive,
    };
    let report =
        minimal::classification_report(&code, &mode, cli.cap).map_err(|e| e.to_string())?;

    #[derive(Serialize)]
    struct CompareRow {
        message: String,
        predicted: minimal::Prediction,
        oracle_minimal: bool,
        agree: bool,
    }
    let rows: Vec<CompareRow> = report
        .rows
        .iter()
        .map(|row| CompareRow {
            message: hex_join(&row.message.coords()),
            predicted: row.predicted.clone(),
            oracle_minimal: row.oracle_minimal,
            agree: row.agree,
        })
        .collect();
    let violations: Vec<serde_json::Value> = rows
        .iter()
        .filter(|row| !row.agree)
        .map(|row| json!({"check": "classification", "data": row}))
        .collect();

    #[derive(Serialize)]
    struct CompareResults {
        checked: u64,
        disagreements: u64,
        tallies: std::collections::BTreeMap<&'static str, minimal::AgreementTally>,
        rows: Vec<CompareRow>,
    }
    let results = CompareResults {
        checked: report.checked,
        disagreements: report.disagreements,
        tallies: report.tallies,
        rows,
    };
    let mut config = base_config(cli, "minimal compare");
    config.q = Some(args.params.q);
    config.r = Some(args.params.r);
    config.k = Some(args.params.k);
    fill_mode(&mut config, &mode);
    emit(cli, config, results, violations, started)
}

fn variety_count(cli: &Cli, args: &VarietyCountArgs, started: Instant) -> CmdResult {
    let tower = tower_from_q(args.q, args.r, cli.field_cap)?;
    let coeffs = parse_elements(&tower, &args.coeffs)?;
    let spec = VarietySpec::new(tower, UniPoly::new(coeffs.clone()));
    let s_count = spec.count_s_points();
    let orbit_zero_count = spec.orbit_zero_count();

    let mut violations = Vec::new();
    if s_count != orbit_zero_count {
        violations.push(json!({
            "check": "orbit-equivalence",
            "data": {"s_count": s_count, "orbit_zero_count": orbit_zero_count},
        }));
    }

    #[derive(Serialize)]
    struct CountResults {
        coeffs: String,
        s_count: u64,
        orbit_zero_count: u64,
    }
    let results = CountResults {
        coeffs: hex_join(&coeffs),
        s_count,
        orbit_zero_count,
    };
    let mut config = base_config(cli, "variety count");
    config.q = Some(args.q);
    config.r = Some(args.r);
    config.coeffs = Some(args.coeffs.clone());
    emit(cli, config, results, violations, started)
}

#[derive(Serialize)]
struct VerifyTrial {
    trial: u64,
    coeffs: String,
    s_count: u64,
    intersection_count: u64,
    orbit_zero_count: u64,
    weight: u64,
    weight_complement: u64,
    m_row_identity: bool,
    pass: bool,
}

fn variety_verify(cli: &Cli, args: &VarietyVerifyArgs, started: Instant) -> CmdResult {
    let code = build_code(&args.params, cli)?;
    let curve = code.curve().clone();
    let tower = curve.tower().clone();
    let order = tower.ext().order();
    let n = code.n() as u64;

    // Draws are sequential from the seed; trials then run in parallel
    // with an order-preserving collect, so worker count is invisible.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let draws: Vec<Vec<Felt>> = (0..args.trials)
        .map(|_| {
            (0..=args.params.k)
                .map(|_| Felt(rng.gen_range(0..order)))
                .collect()
        })
        .collect();

    let rows: Vec<VerifyTrial> = draws
        .into_par_iter()
        .enumerate()
        .map(|(i, a)| {
            let spec = VarietySpec::new(tower.clone(), UniPoly::new(a.clone()));
            let eq = variety::equivalence_check(&spec, &curve)
                .expect("curve and spec share a tower");
            let msg = Message {
                b: Felt::ONE,
                a: a.clone(),
            };
            let weight = code.encode(&msg).weight();
            let complement = n - weight;
            let pass = eq.pass && complement == eq.s_count && weight == code.weight_of(&msg);
            VerifyTrial {
                trial: i as u64,
                coeffs: hex_join(&a),
                s_count: eq.s_count,
                intersection_count: eq.intersection_count,
                orbit_zero_count: eq.orbit_zero_count,
                weight,
                weight_complement: complement,
                m_row_identity: eq.m_row_identity,
                pass,
            }
        })
        .collect();

    let violations: Vec<serde_json::Value> = rows
        .iter()
        .filter(|row| !row.pass)
        .map(|row| json!({"check": "equivalence", "data": row}))
        .collect();

    #[derive(Serialize)]
    struct VerifyResults {
        trials: u64,
        passes: u64,
        failures: u64,
        rows: Vec<VerifyTrial>,
    }
    let failures = violations.len() as u64;
    let results = VerifyResults {
        trials: args.trials,
        passes: args.trials - failures,
        failures,
        rows,
    };
    let mut config = base_config(cli, "variety verify");
    config.q = Some(args.params.q);
    config.r = Some(args.params.r);
    config.k = Some(args.params.k);
    config.trials = Some(args.trials);
    config.seed = Some(args.seed);
    emit(cli, config, results, violations, started)
}

fn bounds(cli: &Cli, args: &BoundsArgs, started: Instant) -> CmdResult {
    let theorem = match args.theorem {
        TheoremArg::Cm => BoundTheorem::CafureMatera,
        TheoremArg::Lw => BoundTheorem::LangWeil {
            c: args.lw_c.ok_or("--theorem lw requires --lw-c")?,
        },
        TheoremArg::General => BoundTheorem::PropGeneral {
            variant: match args.variant {
                VariantArg::Printed => IneqVariant::Printed,
                VariantArg::Corrected => IneqVariant::Corrected,
            },
        },
    };
    // The as-printed sign of the one-sided floor is reported but never
    // asserted; the corrected form and the two-sided windows are.
    let asserted = !matches!(
        theorem,
        BoundTheorem::PropGeneral {
            variant: IneqVariant::Printed
        }
    );
    let tower = tower_from_q(args.params.q, args.params.r, cli.field_cap)?;
    let (q, r, k) = (args.params.q, args.params.r, args.params.k);

    let mut config = base_config(cli, "bounds");
    config.q = Some(q);
    config.r = Some(r);
    config.k = Some(k);
    config.theorem = Some(match args.theorem {
        TheoremArg::Cm => "cm",
        TheoremArg::Lw => "lw",
        TheoremArg::General => "general",
    });
    if matches!(args.theorem, TheoremArg::General) {
        config.variant = Some(match args.variant {
            VariantArg::Printed => "printed",
            VariantArg::Corrected => "corrected",
        });
    }
    config.lw_c = args.lw_c;

    let violates = |report: &variety::BoundReport| {
        asserted && report.hypothesis_met && !report.window.degenerate && !report.holds
    };

    match (&args.coeffs, args.trials) {
        (Some(text), None) => {
            let coeffs = parse_elements(&tower, text)?;
            if coeffs.len() != k as usize + 1 {
                return Err(format!(
                    "--coeffs needs k + 1 = {} entries, got {}",
                    k + 1,
                    coeffs.len()
                ));
            }
            let spec = VarietySpec::new(tower, UniPoly::new(coeffs.clone()));
            let report = variety::bound_report(q, r, k, spec.count_s_points(), &theorem);
            let mut violations = Vec::new();
            if violates(&report) {
                violations.push(json!({"check": "bound-window", "data": report}));
            }
            config.coeffs = Some(text.clone());
            emit(cli, config, report, violations, started)
        }
        (None, Some(trials)) => {
            let order = tower.ext().order();
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let draws: Vec<Vec<Felt>> = (0..trials)
                .map(|_| {
                    let mut a: Vec<Felt> =
                        (0..k).map(|_| Felt(rng.gen_range(0..order))).collect();
                    // Top coefficient nonzero: the variety has degree
                    // max(k, r), matching the window's d.
                    a.push(Felt(rng.gen_range(1..order)));
                    a
                })
                .collect();

            #[derive(Serialize)]
            struct BoundTrial {
                trial: u64,
                coeffs: String,
                report: variety::BoundReport,
            }
            let rows: Vec<BoundTrial> = draws
                .into_par_iter()
                .enumerate()
                .map(|(i, a)| {
                    let spec = VarietySpec::new(tower.clone(), UniPoly::new(a.clone()));
                    BoundTrial {
                        trial: i as u64,
                        coeffs: hex_join(&a),
                        report: variety::bound_report(q, r, k, spec.count_s_points(), &theorem),
                    }
                })
                .collect();
            let violations: Vec<serde_json::Value> = rows
                .iter()
                .filter(|row| violates(&row.report))
                .map(|row| json!({"check": "bound-window", "data": row}))
                .collect();

            #[derive(Serialize)]
            struct BoundResults {
                trials: u64,
                all_hold: bool,
                rows: Vec<BoundTrial>,
            }
            let results = BoundResults {
                trials,
                all_hold: rows.iter().all(|row| row.report.holds),
                rows,
            };
            config.trials = Some(trials);
            config.seed = Some(args.seed);
            emit(cli, config, results, violations, started)
        }
        (Some(_), Some(_)) => Err("--coeffs and --trials are mutually exclusive".into()),
        (None, None) => Err("provide --coeffs for one polynomial or --trials for a seeded batch".into()),
    }
}

fn conics_survey(cli: &Cli, args: &ConicsSurveyArgs, started: Instant) -> CmdResult {
    let tower = tower_from_q(args.q, 2, cli.field_cap)?;
    let plane = HermitianPlane::build(tower, cli.cap).map_err(|e| e.to_string())?;
    let mode = args.traversal.resolve()?;
    let report = plane
        .survey(&mode, args.validate_prop53, cli.cap)
        .map_err(|e| e.to_string())?;

    let mut violations: Vec<serde_json::Value> = report
        .violations
        .iter()
        .map(|v| json!({"check": "pattern-catalog", "data": v}))
        .collect();

    #[derive(Serialize)]
    struct Prop53Summary {
        checked: u64,
        agreements: u64,
        disagreements: u64,
    }
    let prop53 = report.prop53.as_ref().map(|p| {
        for d in &p.disagreements {
            violations.push(json!({"check": "prop53", "data": d}));
        }
        Prop53Summary {
            checked: p.checked,
            agreements: p.agreements,
            disagreements: p.disagreements.len() as u64,
        }
    });

    #[derive(Serialize)]
    struct SurveyResults {
        q: u32,
        checked: u64,
        code_dimension: usize,
        histogram: Vec<normtrace_core::conics::HistogramRow>,
        #[serde(skip_serializing_if = "Option::is_none")]
        prop53: Option<Prop53Summary>,
    }
    let results = SurveyResults {
        q: args.q,
        checked: report.checked,
        code_dimension: plane.measured_dimension(),
        histogram: report.histogram,
        prop53,
    };
    let mut config = base_config(cli, "conics survey");
    config.q = Some(args.q);
    config.validate_prop53 = Some(args.validate_prop53);
    fill_mode(&mut config, &mode);
    emit(cli, config, results, violations, started)
}
