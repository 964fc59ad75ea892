//! `orderkit`: bounds, order and ideal inspection, Γ-structure counts and
//! the verification suite, with JSON output.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error or failed check,
//! 3 exhausted search budget.

mod commands;
mod config;
mod parse;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use config::Settings;

#[derive(Parser, Debug)]
#[command(name = "orderkit", version, about = "Orders, ideal classes and explicit bounds in number fields")]
struct Cli {
    /// Job file of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `json` (default) or `table`.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an explicit bound exactly or as a certified logarithm.
    Bound(BoundArgs),
    /// Discriminant, conductor, units and class number of an order.
    OrderInfo(OrderArgs),
    /// The ideal class monoid with its multiplication table.
    ClassMonoid(MonoidArgs),
    /// Count structures of an order on a matrix order M_n(O_K).
    GammaCount(GammaArgs),
    /// Run every check over the quadratic corpus.
    VerifySuite(SuiteArgs),
}

#[derive(clap::Args, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
struct BoundArgs {
    /// Formula id, e.g. `thm-a-height`; an unknown id lists the valid ones.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// |Pic(O)|.
    #[arg(long)]
    pic: Option<String>,
    /// Level-structure size over C, or `inf`.
    #[arg(long)]
    max_level: Option<String>,
    /// Norm of the conductor.
    #[arg(long)]
    n_f: Option<String>,
    #[arg(long)]
    h: Option<String>,
    /// Degree of the normal closure.
    #[arg(long)]
    l: Option<String>,
    /// Minimal isogeny degree, replacing the uniform one.
    #[arg(long)]
    d_min: Option<String>,
    /// Comma-separated excluded primes.
    #[arg(long, allow_hyphen_values = true)]
    excluded_primes: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    log_only: Option<String>,
    /// Largest exact value written out in full.
    #[arg(long)]
    max_print_digits: Option<String>,
}

#[derive(clap::Args, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
struct OrderArgs {
    /// Defining polynomial, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
    /// Order basis rows `a,b;c,d/den`; default is the maximal order.
    #[arg(long, allow_hyphen_values = true)]
    order_basis: Option<String>,
    /// Conductor of a quadratic order (instead of a basis).
    #[arg(long)]
    conductor: Option<String>,
}

#[derive(clap::Args, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
struct MonoidArgs {
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    order_basis: Option<String>,
    #[arg(long)]
    conductor: Option<String>,
    /// Cross-check against the sublattice census (default true).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    census: Option<String>,
}

#[derive(clap::Args, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
struct GammaArgs {
    /// Field of the order Γ, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    gamma_field: Option<String>,
    /// Basis of Γ; default is the maximal order.
    #[arg(long, allow_hyphen_values = true)]
    gamma_basis: Option<String>,
    /// Conductor of a quadratic Γ (instead of a basis).
    #[arg(long)]
    gamma_conductor: Option<String>,
    /// Base field K of M_n(O_K); default Q.
    #[arg(long, allow_hyphen_values = true)]
    target_field: Option<String>,
    /// Matrix size n.
    #[arg(long)]
    target_n: Option<String>,
}

#[derive(clap::Args, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
struct SuiteArgs {
    /// Largest |field discriminant| in the corpus (default 200).
    #[arg(long)]
    max_disc: Option<String>,
    /// Largest conductor in the corpus (default 6).
    #[arg(long)]
    max_conductor: Option<String>,
    /// Random conjugations per structure.
    #[arg(long)]
    conjugations: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Corrupt one multiplication-table entry (negative control).
    #[arg(long, hide = true, num_args = 0..=1, default_missing_value = "true")]
    inject_fault: Option<String>,
}

pub enum CliError {
    Usage(String),
    Domain(orderkit::Error),
    /// The command ran but its checks failed; the report is still printed.
    Failed { report: Value, budget_only: bool },
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

impl From<orderkit::Error> for CliError {
    fn from(e: orderkit::Error) -> Self {
        CliError::Domain(e)
    }
}

fn flag_settings<T: Serialize>(args: &T) -> Settings {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m
            .into_iter()
            .filter_map(|(k, v)| match v {
                Value::String(s) => Some((k, s)),
                _ => None,
            })
            .collect(),
        _ => Settings::new(),
    }
}

fn known_keys(command: &str) -> BTreeSet<String> {
    let cli = Cli::command();
    let sub = cli.find_subcommand(command).expect("subcommand exists");
    sub.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).chain(["format".to_string()]).collect()
}

fn render(value: &Value, format: &str) -> String {
    match format {
        "table" => match value {
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}\t{s}"),
                    other => format!("{k}\t{other}"),
                })
                .collect::<Vec<_>>()
                .join("\n"),
            other => other.to_string(),
        },
        _ => serde_json::to_string_pretty(value).expect("JSON values serialize"),
    }
}

fn run() -> Result<(Value, String), (CliError, Value, String)> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let msg = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(0);
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => "missing subcommand; see --help".to_string(),
                _ => e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string(),
            };
            return Err((CliError::Usage(msg), Value::Null, "json".into()));
        }
    };
    let (name, flags) = match &cli.command {
        Command::Bound(a) => ("bound", flag_settings(a)),
        Command::OrderInfo(a) => ("order-info", flag_settings(a)),
        Command::ClassMonoid(a) => ("class-monoid", flag_settings(a)),
        Command::GammaCount(a) => ("gamma-count", flag_settings(a)),
        Command::VerifySuite(a) => ("verify-suite", flag_settings(a)),
    };
    let fail = |e: CliError| (e, Value::Null, "json".to_string());
    let file = match &cli.config {
        Some(p) => config::load(p).map_err(|e| fail(CliError::Usage(e)))?,
        None => Settings::new(),
    };
    let known = known_keys(name);
    if let Some(k) = file.keys().find(|k| !known.contains(*k)) {
        return Err(fail(CliError::Usage(format!("unknown config key {k:?} for {name}"))));
    }
    let mut settings = config::merge(file, flags);
    if let Some(f) = &cli.format {
        settings.insert("format".into(), f.clone());
    }
    let format = settings.remove("format").unwrap_or_else(|| "json".into());
    if format != "json" && format != "table" {
        return Err(fail(CliError::Usage(format!("unknown format {format:?}"))));
    }
    let job = json!({ "command": name, "inputs": settings });
    let result = match name {
        "bound" => commands::bound(&settings),
        "order-info" => commands::order_info(&settings),
        "class-monoid" => commands::class_monoid(&settings),
        "gamma-count" => commands::gamma_count(&settings),
        _ => commands::verify_suite(&settings),
    };
    match result {
        Ok(mut v) => {
            v["job"] = job;
            Ok((v, format))
        }
        Err(e) => Err((e, job, format)),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    match run() {
        Ok((v, format)) => {
            emit(&render(&v, &format));
            ExitCode::SUCCESS
        }
        Err((CliError::Usage(msg), _, _)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err((CliError::Domain(e), job, format)) => {
            let v = json!({
                "error": { "module": e.module, "op": e.op, "kind": e.kind.name(), "message": e.kind.to_string() },
                "job": job,
            });
            emit(&render(&v, &format));
            eprintln!("error: {e}");
            ExitCode::from(if e.kind.is_budget() { 3 } else { 2 })
        }
        Err((CliError::Failed { mut report, budget_only }, job, format)) => {
            report["job"] = job;
            emit(&render(&report, &format));
            eprintln!("error: verification failed");
            ExitCode::from(if budget_only { 3 } else { 2 })
        }
    }
}
