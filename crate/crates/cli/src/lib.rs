//! The `gamma` command suite: loads JSON documents, runs one check and
//! reports the outcome as JSON or text.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical property failed,
//! 2 invalid input or precondition, 3 resource budget exceeded.

mod commands;
pub mod load;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamma_core::homological::Truncation;
use serde::{Deserialize, Serialize};

pub use load::InputDigest;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding enumeration caps.
pub const BUDGET_ENV: &str = "GAMMA_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn at(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

impl From<gamma_core::Error> for CliError {
    fn from(e: gamma_core::Error) -> Self {
        use gamma_core::Error::*;
        let code = match e {
            Input(_) | Precondition(_) => EXIT_INPUT,
            Resource { .. } => EXIT_RESOURCE,
            Structural(_) => EXIT_FAIL,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruncateSide {
    Le0,
    Ge0,
}

impl From<TruncateSide> for Truncation {
    fn from(s: TruncateSide) -> Self {
        match s {
            TruncateSide::Le0 => Truncation::Le0,
            TruncateSide::Ge0 => Truncation::Ge0,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gamma", version, about = "Finite checks for commutative ternary Γ-semirings")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Drop the timing field so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Generators of the multiplicative system, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seed: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive check of the six structure axioms.
    CheckAxioms { structure: PathBuf },
    /// Prime Γ-ideals, basic opens and the basis laws.
    Spec {
        structure: PathBuf,
        /// Largest carrier enumerated.
        #[arg(long, default_value_t = gamma_core::spectrum::DEFAULT_SPEC_BOUND)]
        bound: usize,
    },
    /// Localization at the system generated by the seed.
    Localize {
        structure: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Localization of a module.
    LocalizeModule {
        structure: PathBuf,
        module: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Tensor product of two modules.
    Tensor {
        structure: PathBuf,
        left: PathBuf,
        right: PathBuf,
        /// Compare Hom(M⊗N, P) with balanced maps into this module.
        #[arg(long)]
        universal: Option<PathBuf>,
    },
    /// Group completion with its extension certificate.
    Complete {
        structure: PathBuf,
        module: PathBuf,
        /// Check initiality against the cyclic group of this order.
        #[arg(long = "target-cyclic")]
        target_cyclic: Vec<usize>,
    },
    /// Tilde presheaf, global sections and gluing.
    SheafCheck { structure: PathBuf, module: PathBuf },
    /// Homology, heart check and optional truncation or cone.
    Homology {
        structure: PathBuf,
        complex: PathBuf,
        #[arg(long, value_enum)]
        truncate: Option<TruncateSide>,
        /// Replace the complex by the cone of this chain map.
        #[arg(long)]
        cone: Option<PathBuf>,
    },
    /// Exhaustive search for binary shadows reflecting fraction equality.
    ShadowSearch {
        structure: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 12)]
        max_ring: usize,
        /// Include the boolean semiring.
        #[arg(long)]
        semiring: bool,
        /// Exempt the one-element ring from the 0-free rule.
        #[arg(long)]
        include_zero_ring: bool,
    },
    /// Write structure documents.
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// `Z_n` with `{a,b,c}_γ = abcγ mod n`.
    Family {
        #[arg(long)]
        modulus: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full fixture corpus.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub error: Option<String>,
    /// Human-readable descriptions of failed checks.
    pub findings: Vec<String>,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// What a command produced: its result and any failed checks.
pub(crate) struct Outcome {
    pub result: serde_json::Value,
    pub findings: Vec<String>,
    pub exit_override: Option<i32>,
}

impl Outcome {
    pub(crate) fn new(result: impl Serialize) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("reports serialize"),
            findings: Vec::new(),
            exit_override: None,
        }
    }

    pub(crate) fn finding(&mut self, failed: bool, message: impl Into<String>) {
        if failed {
            self.findings.push(message.into());
        }
    }
}

pub fn budget_from_env() -> Option<u64> {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckAxioms { .. } => "check-axioms",
        Command::Spec { .. } => "spec",
        Command::Localize { .. } => "localize",
        Command::LocalizeModule { .. } => "localize-module",
        Command::Tensor { .. } => "tensor",
        Command::Complete { .. } => "complete",
        Command::SheafCheck { .. } => "sheaf-check",
        Command::Homology { .. } => "homology",
        Command::ShadowSearch { .. } => "shadow-search",
        Command::Generate(_) => "generate",
    }
}

/// Parses `argv` (without the program name) and runs the command. Returns
/// the exit code and the rendered report.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("gamma".into()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            return (code, e.to_string());
        }
    };
    let report = execute(&cli, args.iter().map(|a| a.to_string_lossy().into_owned()).collect());
    let text = render(&report, cli.format);
    (report.exit_code, text)
}

pub fn execute(cli: &Cli, args: Vec<String>) -> Report {
    let start = Instant::now();
    let mut loader = load::Loader::default();
    let outcome = commands::dispatch(&cli.command, &mut loader, budget_from_env());
    let (verdict, exit_code, error, findings, result) = match outcome {
        Ok(o) => {
            let code = o.exit_override.unwrap_or(if o.findings.is_empty() { EXIT_PASS } else { EXIT_FAIL });
            let verdict = if code == EXIT_PASS { Verdict::Pass } else { Verdict::Fail };
            (verdict, code, None, o.findings, o.result)
        }
        Err(e) => (Verdict::Error, e.code, Some(e.message), Vec::new(), serde_json::Value::Null),
    };
    Report {
        command: command_name(&cli.command).to_string(),
        args,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: loader.inputs,
        verdict,
        exit_code,
        error,
        findings,
        result,
        elapsed_ms: (!cli.no_timing).then(|| start.elapsed().as_millis() as u64),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Text => {
            let mut out = format!("{}: {:?} (exit {})\n", report.command, report.verdict, report.exit_code);
            if let Some(e) = &report.error {
                out.push_str(&format!("error: {e}\n"));
            }
            for f in &report.findings {
                out.push_str(&format!("finding: {f}\n"));
            }
            if let serde_json::Value::Object(map) = &report.result {
                for (k, v) in map {
                    let mut s = v.to_string();
                    if s.chars().count() > 100 {
                        s = s.chars().take(97).collect::<String>() + "...";
                    }
                    out.push_str(&format!("  {k}: {s}\n"));
                }
            }
            for d in &report.inputs {
                out.push_str(&format!("input {} sha256 {}\n", d.path, d.sha256));
            }
            out
        }
    }
}
