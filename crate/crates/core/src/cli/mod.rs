//! Command-line front end: scenario loading, the verification commands and
//! JSON report emission.
//!
//! Exit codes: 0 all checks pass, 2 a check failed, 3 degenerate scenario
//! (vanishing fudge factor, missing square root, precision loss), 4 invalid
//! input, 1 anything else.

pub mod commands;
pub mod report;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;
use serde_json::Value;

pub use commands::Options;
pub use report::{Check, Mode, Outcome, Report, Status};
pub use scenario::{parse_padic_literal, Inputs, Precision, PsiSpec, Scenario, ScenarioFile};

use crate::error::{Error, Result};
use crate::exactalg::rational::parse_rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Class group of the order of discriminant −D c².
    Classgroup,
    /// Theta series of ψ with its eigenform and ideal-count checks.
    Theta,
    /// Weight-k Eisenstein series attached to χ_K.
    Eisenstein,
    /// Euler and assembly identities over an l range, and 𝔣_∞(−1).
    VerifyFactors,
    /// λ by every applicable route.
    Lambda,
    /// Point recovery from an iterated-integral value.
    Recover,
    /// Every command above.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classgroup => "classgroup",
            Command::Theta => "theta",
            Command::Eisenstein => "eisenstein",
            Command::VerifyFactors => "verify-factors",
            Command::Lambda => "lambda",
            Command::Recover => "recover",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "starkrankin", version, about = "Verification suites for Rankin-type factorizations and elliptic Stark constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario JSON file.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Lowest l checked by verify-factors (l ≥ −1).
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    pub l_min: i64,
    /// Highest l checked by verify-factors.
    #[arg(long, global = true, default_value_t = 5, allow_negative_numbers = true)]
    pub l_max: i64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record per-check wall time (reports are then no longer reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    /// D for classgroup/eisenstein without a scenario (discriminant −D).
    #[arg(long, global = true)]
    pub disc: Option<u64>,
    /// Order conductor c for classgroup.
    #[arg(long, global = true)]
    pub order_conductor: Option<u64>,
    /// Eisenstein weight.
    #[arg(long, global = true)]
    pub weight: Option<u32>,
    /// Eisenstein level.
    #[arg(long, global = true)]
    pub level: Option<u64>,
    /// q-expansion truncation.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Multiplies 𝔣_Pet in the assembly check by this rational (negative control).
    #[arg(long, global = true, hide = true)]
    pub inject_pet_factor: Option<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Degenerate(_) | Error::NoSquareRoot(_) | Error::Precision(_) => EXIT_DEGENERATE,
        Error::Validation(_) | Error::Domain(_) | Error::Unsupported(_) => EXIT_INVALID,
        Error::IdentityFailure(_) => EXIT_CHECK_FAILED,
        Error::Resource(_) | Error::Internal(_) => EXIT_OTHER,
    }
}

fn run_command(cmd: Command, r: &mut Report, sc: Option<&Scenario>, o: &Options) -> Result<()> {
    let need = || sc.ok_or_else(|| Error::Validation(format!("{} needs --scenario", cmd.name())));
    match cmd {
        Command::Classgroup => commands::classgroup(r, sc, o),
        Command::Theta => commands::theta(r, need()?, o),
        Command::Eisenstein => commands::eisenstein(r, sc, o),
        Command::VerifyFactors => commands::verify_factors(r, need()?, o),
        Command::Lambda => commands::lambda(r, need()?, o).map(|_| ()),
        Command::Recover => commands::recover(r, need()?, o),
        Command::All => {
            let s = need()?;
            commands::classgroup(r, sc, o)?;
            commands::theta(r, s, o)?;
            commands::eisenstein(r, sc, o)?;
            commands::verify_factors(r, s, o)?;
            commands::lambda(r, s, o)?;
            let has_inputs = s.file.inputs.as_ref().is_some_and(|i| i.iterated_integral.is_some()) || s.point.is_some();
            if has_inputs {
                commands::recover(r, s, o)
            } else {
                r.skip("recover.match", "recovered log_{E,p} equals ±log_{E,p}(P)", "no recovery inputs");
                Ok(())
            }
        }
    }
}

/// Runs one command and returns the report with its exit code.
pub fn execute(cmd: Command, scenario: Option<&Scenario>, seed: Option<u64>, o: &Options, timings: bool) -> (Report, i32) {
    let seed = seed.or(scenario.map(|s| s.file.seed)).unwrap_or(0);
    let echo = scenario.map(|s| s.file.to_json()).unwrap_or(Value::Null);
    let mut r = Report::new(cmd.name(), seed, timings, echo);
    let opts = Options { seed, ..o.clone() };
    match run_command(cmd, &mut r, scenario, &opts) {
        Ok(()) if r.failed() => (r, EXIT_CHECK_FAILED),
        Ok(()) => (r, EXIT_OK),
        Err(e) => {
            r.set_error(&e);
            let code = exit_code(&e);
            (r, code)
        }
    }
}

fn options_from(cli: &Cli) -> Result<Options> {
    let pet_scale = match &cli.inject_pet_factor {
        Some(s) => parse_rational(s)?,
        None => BigRational::one(),
    };
    Ok(Options {
        seed: 0,
        l_min: cli.l_min,
        l_max: cli.l_max,
        pet_scale,
        disc: cli.disc,
        order_conductor: cli.order_conductor,
        weight: cli.weight,
        level: cli.level,
        truncation: cli.truncation,
    })
}

/// Parses `args` (including the program name), runs the command, writes the
/// report and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let prepared = options_from(&cli).and_then(|o| {
        let sc = cli.scenario.as_deref().map(Scenario::from_path).transpose()?;
        Ok((o, sc))
    });
    let (report, code) = match prepared {
        Ok((o, sc)) => execute(cli.command, sc.as_ref(), cli.seed, &o, cli.timings),
        Err(e) => {
            let mut r = Report::new(cli.command.name(), cli.seed.unwrap_or(0), cli.timings, Value::Null);
            r.set_error(&e);
            (r, exit_code(&e))
        }
    };
    let text = report.render();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_OTHER;
            }
        }
        None => print!("{text}"),
    }
    if code != EXIT_OK {
        if let Some(Value::Object(err)) = report.to_json().get("error") {
            eprintln!("error: {}", err.get("message").and_then(Value::as_str).unwrap_or("unknown"));
        } else {
            let failed: Vec<_> = report.checks().filter(|c| c.status == Status::Fail).map(|c| c.name.clone()).collect();
            eprintln!("failed checks: {}", failed.join(", "));
        }
    }
    code
}
