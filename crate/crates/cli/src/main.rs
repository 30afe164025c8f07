//! `loxo`: projections, loxodromes, connection/curvature dumps, the Gaussian
//! family and the verification suite, as CSV or JSON on stdout.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ContextKind, Args, Parser, Subcommand};

use crate::config::{parse_real, FileConfig};
use crate::error::{CliError, EXIT_USAGE};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "loxo",
    version,
    about = "Loxodromes, Mercator maps and flat torsionful connections"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat TOML config file; flags override its values.
    #[arg(long, global = true, env = "LOXO_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
    /// Emit a JSON array of records.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV with a header row.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map points between charts (sphere <-> mercator, pseudosphere <-> flattened, gauss charts).
    Project(ProjectArgs),
    /// Sample a loxodrome on the sphere or pseudosphere, optionally with its planar image.
    Loxodrome(LoxodromeArgs),
    /// Dump Weizenboeck connection, torsion and curvature components.
    Fields(FieldsArgs),
    /// Run the numerical verification suite.
    Verify(VerifyArgs),
    /// Gaussian family traced by a pseudosphere loxodrome.
    Gauss(GaussArgs),
}

#[derive(Debug, Args)]
struct ProjectArgs {
    /// Source chart: sphere, mercator, pseudosphere, flattened, gauss, gauss-normalized.
    #[arg(long)]
    chart: Option<String>,
    /// Target chart.
    #[arg(long)]
    to: Option<String>,
    /// Swap source and target charts.
    #[arg(long)]
    invert: bool,
    /// Point as `a,b`; repeat the flag or separate points with `;`.
    #[arg(long, value_name = "A,B", required = true)]
    point: Vec<String>,
    #[command(flatten)]
    radius: RadiusArgs,
    #[command(flatten)]
    bx: BoxArgs,
}

#[derive(Debug, Args)]
struct RadiusArgs {
    /// Sphere radius or pseudoradius [default: 1 for sphere charts, sqrt(2) otherwise].
    #[arg(long = "R", alias = "radius", value_parser = parse_real, allow_hyphen_values = true)]
    radius: Option<f64>,
    /// Reference meridian [default: 0].
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    phi0: Option<f64>,
}

#[derive(Debug, Args)]
struct BoxArgs {
    /// Smallest admitted standard deviation [default: 1].
    #[arg(long, value_parser = parse_real)]
    sigma_min: Option<f64>,
    /// Largest admitted |mean| [default: pi].
    #[arg(long = "mu-max", value_parser = parse_real)]
    mu_max: Option<f64>,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Course angle in (0, pi), measured from the meridian; accepts forms like pi/3.
    #[arg(long, value_parser = parse_real)]
    course: Option<f64>,
    /// Parameter range end [default: 1].
    #[arg(long = "t-end", value_parser = parse_real)]
    t_end: Option<f64>,
    /// Parameter step [default: 0.01]; the last step is shortened to hit t-end.
    #[arg(long, value_parser = parse_real)]
    dt: Option<f64>,
    /// Number of uniform samples on [0, t-end]; takes precedence over --dt.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
}

#[derive(Debug, Args)]
struct LoxodromeArgs {
    /// sphere or pseudosphere [default: sphere].
    #[arg(long)]
    chart: Option<String>,
    /// Also emit the planar image: mercator (sphere) or flattened (pseudosphere).
    #[arg(long)]
    to: Option<String>,
    #[command(flatten)]
    radius: RadiusArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Debug, Args)]
struct FieldsArgs {
    /// sphere or pseudosphere [default: sphere].
    #[arg(long)]
    chart: Option<String>,
    /// Evaluation point `a,b`; repeatable. Defaults to a 5x5 grid.
    #[arg(long, value_name = "A,B")]
    point: Vec<String>,
    /// connection, torsion, riemann or all.
    #[arg(long, default_value = "all")]
    field: String,
    /// Differentiate the frame numerically instead of analytically.
    #[arg(long)]
    fd: bool,
    /// Riemann components below this magnitude are flagged ZERO [default: 1e-6].
    #[arg(long = "zero-tol", value_parser = parse_real)]
    zero_tol: Option<f64>,
    #[arg(long = "R", alias = "radius", value_parser = parse_real)]
    radius: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run one group (e.g. gudermannian) or criterion number.
    #[arg(long)]
    only: Option<String>,
}

#[derive(Debug, Args)]
struct GaussArgs {
    /// Longitude offset of the underlying pseudosphere loxodrome [default: 0].
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    phi0: Option<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    bx: BoxArgs,
}

/// Config file plus output-format flags, shared by every command.
pub struct Context {
    pub file: FileConfig,
    format_flag: Option<Format>,
}

impl Context {
    pub fn format(&self, default: Format) -> Result<Format, CliError> {
        if let Some(f) = self.format_flag {
            return Ok(f);
        }
        match &self.file.format {
            Some(name) => Format::from_name(name).ok_or_else(|| {
                CliError::usage(
                    "format",
                    format!("unknown format {name:?}; expected csv, json or text"),
                )
            }),
            None => Ok(default),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format_flag = if cli.global.json {
        Some(Format::Json)
    } else if cli.global.csv {
        Some(Format::Csv)
    } else {
        None
    };
    let ctx = Context { file, format_flag };
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Project(a) => commands::project::run(&ctx, a, &mut out),
        Command::Loxodrome(a) => commands::loxodrome::run(&ctx, a, &mut out),
        Command::Fields(a) => commands::fields::run(&ctx, a, &mut out),
        Command::Verify(a) => commands::verify::run(&ctx, a, &mut out),
        Command::Gauss(a) => commands::gauss::run(&ctx, a, &mut out),
    }
}

/// `--t-end <T_END>` -> `t_end`, matching the field names of domain errors.
fn field_name(arg: &str) -> String {
    let flag = arg.split_whitespace().next().unwrap_or(arg);
    flag.trim_start_matches('-').replace('-', "_")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let field = e
                .get(ContextKind::InvalidArg)
                .map(|a| field_name(&a.to_string()))
                .unwrap_or_default();
            let message = e.render().to_string();
            let message = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            CliError::usage(field, message).record().emit();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            e.record().emit();
            ExitCode::from(EXIT_USAGE)
        }
    }
}
