//! `veridict` command line: score a selection, derive a rating row, run the
//! exhaustive sweep with its checks, or start the HTTP service.
//!
//! Results go to stdout; diagnostics and check summaries go to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use veridict_core::analysis::{self, CheckKind, ReportFormat, Sensitivity, SweepConfig};
use veridict_core::derivation::{self, CharacteristicRatings, SchemeKind};
use veridict_core::taxonomy::{builtin_taxonomy, load_taxonomy, resolve_selection, Taxonomy};
use veridict_core::{explain, Phase};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Usage = 1,
    Input = 2,
    CheckFailed = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Counterexamples printed per failing check.
const MAX_COUNTEREXAMPLES: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "veridict", version, about = "Fake-news context risk scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one selection and print the verdict
    Score(ScoreArgs),
    /// Aggregate and classify a characteristic rating row
    Derive(DeriveArgs),
    /// Score the full product of options and phases, write a report, run checks
    Sweep(SweepArgs),
    /// Start the HTTP service
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// PARAM=OPTION, once per parameter; ids or labels, accents optional
    #[arg(long = "select", value_name = "PARAM=OPTION", required = true)]
    select: Vec<String>,
    /// Employment weight phase (1-4)
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    phase: i64,
    /// Taxonomy file, or "builtin"
    #[arg(long, value_name = "PATH")]
    taxonomy: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Country,
    Age,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    scheme: SchemeArg,
    /// Comma-separated tokens: mp,p,pp (country) or vermelho,laranja,verde (age)
    #[arg(long)]
    ratings: String,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Country option ids [default: portugal,angola,guine-bissau]
    #[arg(long, value_delimiter = ',')]
    countries: Vec<String>,
    /// Sweep every country in the taxonomy
    #[arg(long, conflicts_with = "countries")]
    all_countries: bool,
    /// Phases to include [default: 1,2,3,4]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    phases: Vec<i64>,
    /// Report file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// csv or jsonl
    #[arg(long, default_value = "csv")]
    format: String,
    /// all, none, education, country or phase
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, value_name = "PATH")]
    taxonomy: Option<String>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    /// Listen port [env: VERIDICT_PORT; default: 8080]
    #[arg(long)]
    port: Option<u16>,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, value_name = "PATH")]
    taxonomy: Option<String>,
    /// Phase used when a request omits one
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    default_phase: i64,
}

/// Failure carrying the exit code it maps to.
struct Failure(ExitCode, String);

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure(ExitCode::Input, msg.to_string())
    }

    fn usage(msg: impl ToString) -> Self {
        Failure(ExitCode::Usage, msg.to_string())
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                ExitCode::Usage
            } else {
                let _ = write!(out, "{rendered}");
                ExitCode::Success
            };
        }
    };
    let result = match cli.command {
        Command::Score(a) => cmd_score(a, out),
        Command::Derive(a) => cmd_derive(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Serve(a) => cmd_serve(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn load(path: Option<&str>) -> Result<Taxonomy, Failure> {
    match path {
        None | Some("builtin") => Ok(builtin_taxonomy()),
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| Failure::input(format!("{p}: {e}")))?;
            load_taxonomy(&bytes).map_err(|e| Failure::input(format!("{p}: {e}")))
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::input(e)
}

fn cmd_score(a: ScoreArgs, out: &mut dyn Write) -> Result<ExitCode, Failure> {
    let t = load(a.taxonomy.as_deref())?;
    let pairs = a
        .select
        .iter()
        .map(|s| {
            s.split_once('=')
                .ok_or_else(|| Failure::usage(format!("--select expects PARAM=OPTION, got {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let selection = resolve_selection(&t, pairs, a.phase).map_err(Failure::input)?;
    let e = explain(&t, &selection).map_err(Failure::input)?;
    match a.format {
        OutputFormat::Json => {
            let body = json!({"score_percent": e.display_percent, "verdict": e.verdict.token()});
            writeln!(out, "{body}").map_err(io)?;
        }
        OutputFormat::Text => {
            writeln!(out, "veredicto: {} ({})", e.verdict.token(), e.verdict.message()).map_err(io)?;
            writeln!(out, "percentagem: {}%", e.display_percent).map_err(io)?;
        }
    }
    Ok(ExitCode::Success)
}

fn cmd_derive(a: DeriveArgs, out: &mut dyn Write) -> Result<ExitCode, Failure> {
    let kind = match a.scheme {
        SchemeArg::Country => SchemeKind::Country,
        SchemeArg::Age => SchemeKind::Age,
    };
    let ratings = CharacteristicRatings::parse(kind, &a.ratings).map_err(Failure::input)?;
    let level = derivation::derive(&ratings).map_err(Failure::input)?;
    writeln!(out, "{} {}", level.total, level.level.token()).map_err(io)?;
    Ok(ExitCode::Success)
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<ExitCode, Failure> {
    let format: ReportFormat = a.format.parse().map_err(Failure::usage)?;
    let checks = CheckKind::parse_set(&a.check).map_err(Failure::usage)?;
    let t = load(a.taxonomy.as_deref())?;

    let mut cfg = if a.all_countries {
        SweepConfig::all_countries(&t)
    } else {
        SweepConfig::default()
    };
    if !a.countries.is_empty() {
        cfg.countries = a.countries;
    }
    if !a.phases.is_empty() {
        cfg.phases = a
            .phases
            .iter()
            .map(|&p| Phase::new(p).ok_or_else(|| Failure::input(format!("phase out of range: {p} (expected 1..=4)"))))
            .collect::<Result<_, _>>()?;
    }

    let rows = analysis::sweep(&t, &cfg).map_err(Failure::input)?;
    let (sensitivities, results) = analysis::run_checks(&t, &rows, &checks).map_err(Failure::input)?;
    let report = analysis::emit_report(&t, &rows, &sensitivities, &results, format).map_err(Failure::input)?;
    match &a.out {
        Some(path) => fs::write(path, &report).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => out.write_all(&report).map_err(io)?,
    }

    let _ = writeln!(err, "{} rows", rows.len());
    if !sensitivities.is_empty() {
        let stable = sensitivities.iter().filter(|s| s.category == Sensitivity::Stable).count();
        let _ = writeln!(
            err,
            "phase sensitivity: {stable} stable, {} variable",
            sensitivities.len() - stable
        );
    }
    let mut failed = false;
    for r in &results {
        let status = if r.passed { "pass" } else { "FAIL" };
        let _ = writeln!(err, "check {}: {status} ({} counterexamples)", r.check_id, r.counterexamples.len());
        for c in r.counterexamples.iter().take(MAX_COUNTEREXAMPLES) {
            let _ = writeln!(err, "  {c}");
        }
        failed |= !r.passed;
    }
    Ok(if failed { ExitCode::CheckFailed } else { ExitCode::Success })
}

fn cmd_serve(a: ServeArgs) -> Result<ExitCode, Failure> {
    let default_phase = Phase::new(a.default_phase)
        .ok_or_else(|| Failure::input(format!("phase out of range: {} (expected 1..=4)", a.default_phase)))?;
    let env = std::env::var(veridict_service::PORT_ENV).ok();
    let port = veridict_service::resolve_port(a.port, env.as_deref()).map_err(Failure::input)?;
    let t = load(a.taxonomy.as_deref())?;
    let state = veridict_service::AppState::new(t, default_phase);

    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(io)?;
    runtime
        .block_on(veridict_service::serve(state, SocketAddr::new(a.host, port)))
        .map_err(io)?;
    Ok(ExitCode::Success)
}
