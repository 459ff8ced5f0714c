//! Command-line front end. Each command builds a [`Report`] and [`run`] renders it as JSON
//! or CSV; failures map to fixed exit codes.

mod commands;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::gf::GfError;
use crate::rates::RateError;
use crate::specfun::SpecFunError;
use crate::steady::SteadyError;
use crate::wigner::WignerError;

pub use commands::{
    cmd_figure, cmd_limits, cmd_oracle, cmd_paeos, cmd_solve, cmd_verify, cmd_wigner, figure_preset, load_config,
};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_ROUTING: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_NOT_UNIQUE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Default tolerance; overridden by `TPS_EPS`, then by `--eps`.
pub const DEFAULT_EPS: f64 = 1e-12;
pub const EPS_ENV: &str = "TPS_EPS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Routing(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    NotUnique(String),
    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize, report: Box<Report> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Routing(_) => EXIT_ROUTING,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
            CliError::NotUnique(_) => EXIT_NOT_UNIQUE,
            CliError::VerifyFailed { .. } => EXIT_VERIFY_FAILED,
        }
    }
}

impl PartialEq for Report {
    fn eq(&self, other: &Self) -> bool {
        self.to_json() == other.to_json()
    }
}

impl From<RateError> for CliError {
    fn from(e: RateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SpecFunError> for CliError {
    fn from(e: SpecFunError) -> Self {
        match e {
            SpecFunError::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Convergence(e.to_string()),
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        match e {
            GfError::Degenerate { .. } => CliError::Routing(e.to_string()),
            GfError::SpecFun(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SteadyError> for CliError {
    fn from(e: SteadyError) -> Self {
        match e {
            SteadyError::NoUniqueSteadyState(_) | SteadyError::UnsupportedStructure(_) => {
                CliError::NotUnique(format!("{e}; pass --beta0"))
            }
            SteadyError::NonConvergence { .. } | SteadyError::SingularStep(_) => CliError::Convergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<WignerError> for CliError {
    fn from(e: WignerError) -> Self {
        match e {
            WignerError::NoConvergence { .. } => CliError::Convergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "twophoton", version, about = "Stationary photon statistics under one- and two-photon gain and loss")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format (verify prints a table unless this is given)
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutputFormat>,
    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out_path: Option<PathBuf>,
    /// Truncation tolerance (default 1e-12, or $TPS_EPS)
    #[arg(long, global = true)]
    pub eps: Option<f64>,
}

/// `(ν, s, σ, r)` as flags.
#[derive(Debug, Clone, Args)]
pub struct ParamFlags {
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitCase {
    Negbin,
    No2a,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    Nullspace,
    Evolve,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form stationary distribution for (nu, s, sigma, r)
    Solve {
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Truncated master-equation steady state (flags or --config for the general family)
    Oracle {
        #[command(flatten)]
        params: ParamFlags,
        /// JSON file with d1a, d2a, d1e, d2e, d11e, d10a, d12a, w1e, saturated
        #[arg(long, value_name = "FILE", conflicts_with_all = ["nu", "s", "sigma", "r"])]
        config: Option<PathBuf>,
        /// Initial odd-parity weight, needed when parity is conserved
        #[arg(long)]
        beta0: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, value_enum, default_value = "nullspace")]
        method: OracleMethod,
    },
    /// Negative-binomial and no-two-photon-absorption limits
    Limits {
        #[arg(long, value_enum)]
        case: LimitCase,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Phase-averaged even/odd mixture from beta, or from S in the weak one-photon limit
    Paeos {
        #[arg(long)]
        r: f64,
        #[arg(long, conflicts_with = "s_eff", required_unless_present = "s_eff")]
        beta: Option<f64>,
        #[arg(long = "S", id = "s_eff")]
        s_eff: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Radial Wigner function W(x) of the phase-averaged mixture
    Wigner {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 8.0)]
        xmax: f64,
        #[arg(long, default_value_t = 801)]
        points: usize,
    },
    /// Curve data for figure 1 (even), 2 (odd) or 3 (maximally mixed), r = 10
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, default_value_t = 8.0)]
        xmax: f64,
        #[arg(long, default_value_t = 801)]
        points: usize,
    },
    /// Run the consistency sweeps; exit 1 if any check fails
    Verify {
        /// Reduced grid, finishes in a few seconds
        #[arg(long)]
        quick: bool,
        /// Relative error injected into the closed-form side (test hook)
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

/// `--eps`, else `$TPS_EPS`, else the default.
pub fn resolve_eps(flag: Option<f64>) -> Result<f64, CliError> {
    let eps = match flag {
        Some(e) => e,
        None => match std::env::var(EPS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{EPS_ENV}={v:?} is not a number")))?,
            Err(_) => DEFAULT_EPS,
        },
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(eps)
}

/// Executes a parsed command line and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let eps = resolve_eps(cli.eps)?;
    match &cli.command {
        Command::Solve { params, nmax } => cmd_solve(params, *nmax, eps),
        Command::Oracle { params, config, beta0, nmax, method } => {
            cmd_oracle(params, config.as_deref(), *beta0, *nmax, *method, eps)
        }
        Command::Limits { case, s, sigma, rho, nmax } => cmd_limits(*case, *s, *sigma, *rho, *nmax, eps),
        Command::Paeos { r, beta, s_eff, nmax } => cmd_paeos(*r, *beta, *s_eff, *nmax, eps),
        Command::Wigner { r, beta, xmax, points } => cmd_wigner(*r, *beta, *xmax, *points),
        Command::Figure { id, xmax, points } => cmd_figure(*id, *xmax, *points),
        Command::Verify { quick, perturb } => cmd_verify(*quick, *perturb),
    }
}

fn render(report: &Report, format: Option<OutputFormat>) -> String {
    match format {
        Some(OutputFormat::Csv) => report.to_csv(),
        Some(OutputFormat::Json) => report.to_json(),
        None => report.to_table().unwrap_or_else(|| report.to_json()),
    }
}

fn emit(text: &str, path: Option<&std::path::Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    }
}

/// Full entry point: parses `args`, runs the command, writes the output and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = execute(&cli);
    let (report, code) = match result {
        Ok(r) => (r, EXIT_OK),
        Err(CliError::VerifyFailed { failed, report }) => {
            let _ = writeln!(stderr, "error: {failed} verification check(s) failed");
            (*report, EXIT_VERIFY_FAILED)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(&render(&report, cli.out), cli.out_path.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    code
}
