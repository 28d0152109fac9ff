use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use reebcone_cli::report::{EXIT_INPUT, EXIT_USAGE};
use reebcone_cli::{input_failure, run, Command, Flags, Settings};

/// Stability and volume minimization for toric Reeb cones.
#[derive(Debug, Parser)]
#[command(name = "reebcone", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// JSON cone spec.
    #[arg(long)]
    spec: PathBuf,

    /// Reeb vector, as space- or comma-separated rationals (`1/2`, `0.25`).
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<String>>,

    /// Test configuration direction for `futaki` and weight characters.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_hyphen_values = true)]
    eta: Option<Vec<String>>,

    /// Number of Laurent coefficients past the leading one.
    #[arg(long)]
    order: Option<usize>,

    /// Convergence tolerance (overrides REEBCONE_TOL).
    #[arg(long)]
    tol: Option<f64>,

    /// Largest dilation for the S_m table.
    #[arg(long)]
    m_max: Option<u64>,

    /// Attach the best rational approximation of the minimizer with
    /// denominator at most N.
    #[arg(long, value_name = "N")]
    probe_rational: Option<u64>,

    /// Values of t for the truncated character sums.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    t: Option<Vec<f64>>,

    /// Also run the grid oracle with this many subdivisions per axis.
    #[arg(long)]
    grid: Option<usize>,

    /// Read all inputs as binary64 floats.
    #[arg(long)]
    float: bool,

    /// Enable boundary divisors.
    #[arg(long)]
    experimental: bool,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    json_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let flags = Flags {
        xi: cli.xi,
        eta: cli.eta,
        order: cli.order,
        tol: cli.tol,
        m_max: cli.m_max,
        probe_rational: cli.probe_rational,
        t: cli.t,
        grid: cli.grid,
        float: cli.float,
        experimental: cli.experimental,
    };
    let label = cli.spec.display().to_string();
    let report = match Settings::from_env() {
        Err(msg) => input_failure(cli.command, &label, &flags, &Settings::default(), msg),
        Ok(settings) => match std::fs::read_to_string(&cli.spec) {
            Ok(text) => run(cli.command, &text, &label, &flags, &settings),
            Err(e) => input_failure(
                cli.command,
                &label,
                &flags,
                &settings,
                format!("{label}: {e}"),
            ),
        },
    };
    let text = report.to_json();
    match &cli.json_out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("error: {}: {}", err.name, err.message);
    }
    ExitCode::from(report.exit_code() as u8)
}
