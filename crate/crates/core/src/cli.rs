//! The `hypred` command line: `eval`, `verify`, `sweep`, `bench`, `list`.
//!
//! Machine-readable output (JSON, JSONL, CSV) goes to stdout or to the
//! files named by flags; diagnostics go to stderr. Exit codes:
//! 0 success or all PASS, 1 verification FAIL, 2 invalid input or polar
//! parameters, 3 numeric failure (no convergence).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{self, BenchConfig};
use crate::error::Error;
use crate::family::FunctionSpec;
use crate::rational::Rational;
use crate::reductions::{registry, BuildOptions, IdentityId, ReductionParams};
use crate::series::{eval_float, taylor_coeffs, EvalOptions};
use crate::verify::{self, sample_params, Status, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hypred", version, about = "Multi-index hypergeometric series and their reduction formulas")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FnArg {
    Pfq,
    Kdf,
    Sd,
    F3,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    /// 4F5/4F3 numerator (1+d+j+k)/2 instead of (d+j+k)/2
    OnePlusD,
    /// argument x^2/4 for the 4F3 of the cases without e
    QuarterArgument,
}

#[derive(clap::Args, Debug)]
struct ParamSource {
    /// Parameters as inline JSON or a path, e.g. {"d":"1","e":"3/2","alpha":"1/3","beta":"1/5","m":1,"n":0}
    #[arg(long, conflicts_with = "seed")]
    params: Option<String>,
    /// Sample non-polar parameters from this seed instead
    #[arg(long)]
    seed: Option<u64>,
    /// Trial index within the seeded stream
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    /// Sample with e > d > 0
    #[arg(long)]
    strict_e_gt_d: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a series given as JSON with an "fn" field (pfq, kdf, sd, f3, series)
    Eval {
        /// Inline JSON or a path to a JSON file
        #[arg(long)]
        spec: String,
        /// Function family, when the JSON has no "fn" field
        #[arg(long = "fn", value_enum)]
        function: Option<FnArg>,
        #[arg(long, default_value = "0")]
        x: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Float)]
        mode: ModeArg,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_terms: usize,
    },
    /// Verify one identity instance
    Verify {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        source: ParamSource,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value = "1/4")]
        x: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Alternative readings of ambiguous formulas (exact mode)
        #[arg(long, value_enum)]
        reading: Vec<ReadingArg>,
        /// Keep an (e)_{j+k} prefactor with this e in a case without e (exact mode)
        #[arg(long)]
        extra_e: Option<String>,
    },
    /// Verify many sampled instances of many identities
    Sweep {
        /// Comma-separated ids; default all
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long)]
        strict_e_gt_d: bool,
        #[arg(long)]
        beta_equals_alpha: bool,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value = "1/4")]
        float_x: String,
        #[arg(long, default_value_t = 1e-10)]
        float_tol: f64,
        /// Write JSON lines here instead of stdout
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Write the per-id CSV summary here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time direct against reduced summation
    Bench {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        source: ParamSource,
        #[arg(long, default_value = "1/4")]
        x: String,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 60)]
        oracle_order: usize,
        /// Write CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the identity registry as JSON
    List,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NoConvergence { .. } | Error::Overflow(_) => EXIT_NUMERIC,
            _ => EXIT_INVALID,
        };
        Failure { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure { code: EXIT_INVALID, message: err.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(err: csv::Error) -> Self {
        Failure { code: EXIT_INVALID, message: err.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

/// Inline JSON when it looks like JSON, a file path otherwise.
fn read_json_arg(arg: &str) -> Result<serde_json::Value, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_owned()
    } else {
        std::fs::read_to_string(arg).map_err(|e| invalid(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(Failure::from)
}

fn parse_id(s: &str) -> Result<IdentityId, Failure> {
    s.parse().map_err(Failure::from)
}

fn resolve_params(id: IdentityId, src: &ParamSource) -> Result<ReductionParams, Failure> {
    match (&src.params, src.seed) {
        (Some(text), _) => serde_json::from_value(read_json_arg(text)?)
            .map_err(|e| invalid(format!("malformed parameters: {e}"))),
        (None, Some(seed)) => {
            let cfg = VerifyConfig {
                m_max: src.m_max,
                n_max: src.n_max,
                strict_e_gt_d: src.strict_e_gt_d,
                ..VerifyConfig::default()
            };
            Ok(sample_params(seed, src.trial, id, &cfg)?)
        }
        (None, None) => Err(invalid("either --params or --seed is required")),
    }
}

fn write_line(out: &mut dyn Write, v: &serde_json::Value) -> Result<(), Failure> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::SkippedPolar => EXIT_INVALID,
    }
}

fn run_command(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Eval { spec, function, x, mode, order, tol, max_terms } => {
            let mut value = read_json_arg(&spec)?;
            if let (Some(f), Some(obj)) = (function, value.as_object_mut()) {
                let name = f.to_possible_value().expect("no skipped variants").get_name().to_owned();
                obj.entry("fn").or_insert(json!(name));
            }
            let function: FunctionSpec =
                serde_json::from_value(value).map_err(|e| invalid(format!("invalid spec: {e}")))?;
            let series = function.build()?;
            let x = parse_rational(&x)?;
            match mode {
                ModeArg::Exact => {
                    let coeffs = taylor_coeffs(&series, order)?;
                    let mut partial = Rational::zero();
                    for c in coeffs.iter().rev() {
                        partial = partial * &x + c;
                    }
                    write_line(
                        out,
                        &json!({"mode": "exact", "order": order, "x": x, "coeffs": coeffs, "partial_sum": partial}),
                    )?;
                }
                ModeArg::Float => {
                    let opts = EvalOptions { rel_tol: tol, max_terms, ..EvalOptions::default() };
                    let r = eval_float(&series, x.to_f64()?, &opts)?;
                    write_line(
                        out,
                        &json!({"mode": "float", "x": x, "value": r.value, "est_error": r.est_error, "terms": r.terms}),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { id, source, order, mode, x, tol, reading, extra_e } => {
            let id = parse_id(&id)?;
            let p = resolve_params(id, &source)?;
            let report = match mode {
                ModeArg::Exact => {
                    let opts = BuildOptions {
                        mutation: None,
                        one_plus_d_numerator: reading.contains(&ReadingArg::OnePlusD),
                        quarter_argument_without_e: reading.contains(&ReadingArg::QuarterArgument),
                        extra_e: extra_e.as_deref().map(parse_rational).transpose()?,
                    };
                    verify::verify_exact_with(id, &p, order, &opts)?
                }
                ModeArg::Float => verify::verify_float(id, &p, &parse_rational(&x)?, tol)?,
            };
            writeln!(out, "{}", report.to_json_line())?;
            if let Some(d) = &report.diagnostic {
                writeln!(err, "{id}: {d}")?;
            }
            Ok(status_code(report.status))
        }
        Command::Sweep {
            ids,
            trials,
            seed,
            order,
            strict_e_gt_d,
            beta_equals_alpha,
            m_max,
            n_max,
            float_x,
            float_tol,
            jsonl,
            csv,
        } => {
            let ids = if ids.is_empty() {
                IdentityId::ALL.to_vec()
            } else {
                ids.iter().map(|s| parse_id(s)).collect::<Result<_, _>>()?
            };
            let cfg = VerifyConfig {
                order,
                trials,
                seed,
                strict_e_gt_d,
                beta_equals_alpha,
                m_max,
                n_max,
                float_x: parse_rational(&float_x)?,
                float_tol,
            };
            let outcome = verify::verify_sweep(&ids, &cfg)?;
            match jsonl {
                Some(path) => outcome.write_jsonl(BufWriter::new(File::create(path)?))?,
                None => outcome.write_jsonl(&mut *out)?,
            }
            if let Some(path) = csv {
                outcome.write_csv(File::create(path)?)?;
            }
            let t = outcome.totals();
            writeln!(err, "sweep: {} reports, {} pass, {} fail, {} skipped", t.trials, t.pass, t.fail, t.skipped)?;
            Ok(if t.fail == 0 { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Bench { id, source, x, tol, repeats, oracle_order, csv } => {
            let id = parse_id(&id)?;
            let p = resolve_params(id, &source)?;
            let cfg = BenchConfig { x: parse_rational(&x)?, tol, repeats, oracle_order };
            let rows = bench::bench_identity(id, &p, &cfg)?;
            match csv {
                Some(path) => bench::write_csv(&rows, File::create(path)?)?,
                None => bench::write_csv(&rows, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
        Command::List => {
            writeln!(out, "{}", serde_json::to_string(&registry()).expect("registry serializes"))?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run_command(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
