//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse or usage error,
//! 3 unsupported regime.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::builtins;
use crate::field::parse_rational;
use crate::graph::{GraphError, SkeletonDocument, TwoGraphSkeleton};
use crate::identities::{IdentityError, IdentityRegistry};
use crate::kms::{
    Dynamics, KmsError, Rate, SeriesSum, SubinvarianceRegistry, DEFAULT_SERIES_CAP,
};
use crate::report::{
    build_report, render_report_table, render_sweep_table, render_validation_table, sweep,
    sweep_csv,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kmsgraph", version, about = "KMS states of Toeplitz algebras of finite 2-graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the 2-graph conditions on a skeleton.
    Validate {
        /// Path to a JSON skeleton document, or a builtin name.
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Classify the KMS states at one inverse temperature.
    Report {
        input: String,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Method used to compute the reported subinvariance vector.
        #[arg(long, default_value = "closed")]
        y_method: String,
        /// Degree cap for the series method.
        #[arg(long, default_value_t = DEFAULT_SERIES_CAP)]
        cap: u32,
    },
    /// Run the exact identity suite for a recognised family.
    Identities {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Regime and simplex dimension over a range of inverse temperatures.
    Sweep {
        input: String,
        /// Rates `R1,R2`, each `ln<k>` or a positive decimal.
        #[arg(long)]
        r: String,
        /// `A:B:STEP`, inclusive of both endpoints.
        #[arg(long)]
        beta_range: String,
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct DynamicsArgs {
    /// Rates `R1,R2`, each `ln<k>` or a positive decimal; needs `--beta`.
    #[arg(long, requires = "beta", conflicts_with = "x")]
    pub r: Option<String>,
    /// Inverse temperature, as a fraction or decimal.
    #[arg(long, requires = "r")]
    pub beta: Option<String>,
    /// Weight point `P1/Q1,P2/Q2` given exactly.
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
    Table,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<KmsError> for Failure {
    fn from(e: KmsError) -> Self {
        let code = match &e {
            KmsError::Unsupported(_) => EXIT_UNSUPPORTED,
            KmsError::Graph(GraphError::InvalidSkeleton(_)) | KmsError::Inconsistent(_) => {
                EXIT_INVALID
            }
            _ => EXIT_PARSE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses the arguments and runs one command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { input, format } => {
            let g = load(&input)?;
            let report = g.validate();
            match format {
                Format::Table => emit(out, &render_validation_table(&input, &report)),
                Format::Json => emit(out, &to_json(&report)?),
            }
            Ok(if report.is_valid() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Report {
            input,
            dynamics,
            format,
            y_method,
            cap,
        } => {
            let g = load(&input)?;
            ensure_valid(&g, out)?;
            let dynamics = parse_dynamics(&dynamics)?;
            let mut registry = SubinvarianceRegistry::standard();
            registry.register(Box::new(SeriesSum { cap }));
            let method = registry.get(&y_method).ok_or_else(|| {
                Failure::parse(format!(
                    "unknown y method `{y_method}` (available: {})",
                    registry.names().join(", ")
                ))
            })?;
            let report = build_report(&input, &g, &dynamics, method)?;
            match format {
                Format::Table => emit(out, &render_report_table(&report)),
                Format::Json => emit(out, &to_json(&report)?),
            }
            Ok(EXIT_OK)
        }
        Command::Identities { input, format } => {
            let g = load(&input)?;
            match IdentityRegistry::standard().run(&g) {
                Ok((family, results)) => {
                    match format {
                        Format::Table => {
                            let mut text = format!("{input}: {} family\n", family.kind);
                            for r in &results {
                                let status = if r.passed() { "PASS" } else { "FAIL" };
                                text.push_str(&format!("{status}  {:<28} {}\n", r.name, r.description));
                                if let crate::identities::IdentityOutcome::Fail(why) = &r.outcome {
                                    text.push_str(&format!("      {why}\n"));
                                }
                            }
                            emit(out, &text);
                        }
                        Format::Json => emit(out, &to_json(&results)?),
                    }
                    Ok(if results.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_INVALID })
                }
                Err(IdentityError::NotAFamily) => {
                    emit(out, &format!("{input}: not a recognised family; identities skipped\n"));
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Sweep {
            input,
            r,
            beta_range,
            format,
        } => {
            let g = load(&input)?;
            ensure_valid(&g, out)?;
            let rates = parse_rates(&r)?;
            let (start, end, step) = parse_range(&beta_range)?;
            let rows = sweep(&g, rates, &start, &end, &step)?;
            match format {
                SweepFormat::Csv => emit(out, &sweep_csv(&rows)),
                SweepFormat::Json => emit(out, &to_json(&rows)?),
                SweepFormat::Table => emit(out, &render_sweep_table(&rows)),
            }
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::parse(e.to_string()))
}

fn ensure_valid(g: &TwoGraphSkeleton, out: &mut dyn Write) -> Result<(), Failure> {
    let report = g.validate();
    if report.is_valid() {
        return Ok(());
    }
    emit(out, &render_validation_table("input", &report));
    Err(Failure {
        code: EXIT_INVALID,
        message: "skeleton is not a valid 2-graph skeleton".into(),
    })
}

/// Loads a builtin by name, or a JSON skeleton document from a path.
fn load(input: &str) -> Result<TwoGraphSkeleton, Failure> {
    if let Some(g) = builtins::builtin(input) {
        return Ok(g);
    }
    let path = Path::new(input);
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::parse(format!(
            "`{input}` is neither a builtin ({}) nor a readable file: {e}",
            builtins::BUILTIN_NAMES.join(", ")
        ))
    })?;
    let doc: SkeletonDocument = serde_json::from_str(&text).map_err(|e| {
        let context = text
            .lines()
            .nth(e.line().saturating_sub(1))
            .map(|l| format!("\n  {} | {}", e.line(), l.trim_end()))
            .unwrap_or_default();
        Failure::parse(format!("{input}: {e}{context}"))
    })?;
    TwoGraphSkeleton::from_document(doc).map_err(|e| Failure::parse(format!("{input}: {e}")))
}

fn parse_pair<T>(text: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<[T; 2], Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::parse(format!("{what} needs two comma-separated values, got `{text}`")));
    }
    let a = f(parts[0]).ok_or_else(|| Failure::parse(format!("cannot parse {what} entry `{}`", parts[0])))?;
    let b = f(parts[1]).ok_or_else(|| Failure::parse(format!("cannot parse {what} entry `{}`", parts[1])))?;
    Ok([a, b])
}

fn parse_rates(text: &str) -> Result<[Rate; 2], Failure> {
    parse_pair(text, "--r", Rate::parse)
}

fn parse_dynamics(args: &DynamicsArgs) -> Result<Dynamics, Failure> {
    let d = match (&args.r, &args.beta, &args.x) {
        (Some(r), Some(beta), None) => {
            let rates = parse_rates(r)?;
            let beta = parse_rational(beta.trim())
                .ok_or_else(|| Failure::parse(format!("cannot parse --beta `{beta}`")))?;
            Dynamics::from_rates(rates, beta)
        }
        (None, None, Some(x)) => {
            Dynamics::from_weights(parse_pair(x, "--x", |s| parse_rational(s.trim()))?)
        }
        _ => return Err(Failure::parse("give either --r with --beta, or --x")),
    };
    d.map_err(|e| Failure::parse(e.to_string()))
}

fn parse_range(text: &str) -> Result<(BigRational, BigRational, BigRational), Failure> {
    let parts: Vec<Option<BigRational>> = text.split(':').map(|s| parse_rational(s.trim())).collect();
    match parts.as_slice() {
        [Some(a), Some(b), Some(s)] => Ok((a.clone(), b.clone(), s.clone())),
        _ => Err(Failure::parse(format!(
            "--beta-range must be A:B:STEP with numeric entries, got `{text}`"
        ))),
    }
}
