//! Command-line front end. Exit codes: 0 ok, 1 usage, 2 validation,
//! 3 verification failure, 4 oracle non-convergence.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use buffon_star::cli::{
    cmd_exact, cmd_limit, cmd_simulate, cmd_sweep,
    verify::{self, VerifyOptions, VerifyScope},
    Angle, CommandOutput, ExactArgs, LimitArgs, OutputFormat, SimulateArgs, SweepArgs,
};
use buffon_star::montecarlo::CiMethod;
use buffon_star::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "buffon-star",
    version,
    about = "Intersection statistics for a star of needles on a two-family line lattice",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum CiFlag {
    Normal,
    ClopperPearson,
}

impl From<CiFlag> for CiMethod {
    fn from(flag: CiFlag) -> Self {
        match flag {
            CiFlag::Normal => CiMethod::Normal,
            CiFlag::ClopperPearson => CiMethod::ClopperPearson,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact probabilities p(i, alpha) for odd n, with the cumulative CDF
    Exact {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Angle between the families; accepts radians or "pi/10" forms
        #[arg(long)]
        alpha: Angle,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// p(i, alpha) over an angle grid, with the independence reference p*(i)
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Number of grid points over [0, pi/n]
        #[arg(long = "alpha-grid", default_value_t = 21)]
        alpha_grid: usize,
        /// Restrict output to these counts (repeatable or comma-separated)
        #[arg(long = "i", value_delimiter = ',')]
        select: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo run of the physical throw; any n >= 2
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        alpha: Angle,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = CiFlag::Normal)]
        ci: CiFlag,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite CDFs against the closed-form limit law, with sup-distances
    Limit {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        /// Odd needle counts to tabulate (comma-separated)
        #[arg(long = "n-list", value_delimiter = ',', default_value = "5,9,15,25")]
        n_list: Vec<u32>,
        /// Angles to tabulate (comma-separated; "pi/10" forms allowed)
        #[arg(
            long = "alpha-list",
            value_delimiter = ',',
            default_value = "pi/20,pi/10,pi/4"
        )]
        alpha_list: Vec<Angle>,
        /// Grid size for the sup-distance scan
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle self-checks; non-zero exit on any mismatch
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyScope::All)]
        scope: VerifyScope,
        /// Tolerance overrides, NAME=VALUE (joint, quad, partition,
        /// breadth-resolution, ratio); repeatable
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version as "errors" with zero-exit semantics
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::QuadratureNonConvergence { .. } => EXIT_ORACLE,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Exact {
            n,
            ell,
            a,
            b,
            alpha,
            format,
            out,
        } => {
            let output = cmd_exact(&ExactArgs {
                n,
                ell,
                a,
                b,
                alpha,
            })?;
            emit(output, format, out)
        }
        Command::Sweep {
            n,
            ell,
            a,
            b,
            alpha_grid,
            select,
            format,
            out,
        } => {
            let output = cmd_sweep(&SweepArgs {
                n,
                ell,
                a,
                b,
                alpha_points: alpha_grid,
                select,
            })?;
            emit(output, format, out)
        }
        Command::Simulate {
            n,
            ell,
            a,
            b,
            alpha,
            trials,
            seed,
            workers,
            ci,
            format,
            out,
        } => {
            let output = cmd_simulate(&SimulateArgs {
                n,
                ell,
                a,
                b,
                alpha,
                trials,
                seed,
                workers,
                ci_method: ci.into(),
            })?;
            emit(output, format, out)
        }
        Command::Limit {
            lambda,
            mu,
            n_list,
            alpha_list,
            grid,
            format,
            out,
        } => {
            let output = cmd_limit(&LimitArgs {
                lambda,
                mu,
                n_list,
                alphas: alpha_list,
                grid,
            })?;
            emit(output, format, out)
        }
        Command::Verify { scope, tolerances } => {
            let mut options = VerifyOptions::default();
            for spec in &tolerances {
                let Some((name, value)) = spec.split_once('=') else {
                    eprintln!("error: --tol expects NAME=VALUE, got '{spec}'");
                    return Ok(ExitCode::from(EXIT_USAGE));
                };
                let value: f64 = match value.parse() {
                    Ok(v) => v,
                    Err(e) => {
                        eprintln!("error: bad tolerance value in '{spec}': {e}");
                        return Ok(ExitCode::from(EXIT_USAGE));
                    }
                };
                if let Err(msg) = options.set_tolerance(name.trim(), value) {
                    eprintln!("error: {msg}");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            }
            let report = verify::run(scope, &options)?;
            print!("{}", report.render());
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            })
        }
    }
}

/// Writes the table (and manifest) to the requested sink. CSV keeps the
/// manifest in a `<out>.manifest.json` sidecar so the data bytes stay
/// schema-pure; JSON carries it inline.
fn emit(
    output: CommandOutput,
    format: OutputFormat,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let payload = match format {
        OutputFormat::Csv => output.table.to_csv(),
        OutputFormat::Json => output.table.to_json(&output.manifest),
    };
    match &out {
        Some(path) => {
            write_file(path, &payload);
            if format == OutputFormat::Csv {
                let sidecar = sidecar_path(path);
                write_file(&sidecar, &output.manifest.to_json_pretty());
            }
        }
        None => {
            print!("{payload}");
            if format == OutputFormat::Csv {
                eprintln!("manifest: {}", output.manifest.to_json_pretty());
            }
        }
    }
    for note in &output.notes {
        eprintln!("{note}");
    }
    Ok(if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}

fn sidecar_path(path: &std::path::Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

fn write_file(path: &std::path::Path, contents: &str) {
    let mut file = std::fs::File::create(path)
        .unwrap_or_else(|e| panic!("cannot create {}: {e}", path.display()));
    file.write_all(contents.as_bytes())
        .unwrap_or_else(|e| panic!("cannot write {}: {e}", path.display()));
}
