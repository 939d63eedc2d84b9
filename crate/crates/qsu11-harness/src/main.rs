use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qsu11_harness::{run, Format, RunConfig, Suite};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

/// Runs the qsu11 verification suites and writes CSV/JSON reports.
///
/// Exit status: 0 when every check passes, 1 when some check fails, 2 on a
/// configuration or I/O error.
#[derive(Debug, Parser)]
#[command(name = "qsu11-verify", version)]
struct Cli {
    /// Deformation parameter, 0 < q < 1.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Threshold for exact-identity residuals.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Threshold for quadrature certificates and Gaussian mass.
    #[arg(long = "tol-quad", default_value_t = 1e-8)]
    tol_quad: f64,
    /// Largest |k| of the window on the index set.
    #[arg(long = "max-exponent", default_value_t = 24)]
    max_exponent: u32,
    /// Term budget of every series.
    #[arg(long = "max-terms", default_value_t = 200)]
    max_terms: usize,
    /// Suites to run (identities, spherical, coamenability, smoothing,
    /// approxid). Repeatable or comma separated; all when omitted.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Option<Vec<String>>,
    /// Output directory.
    #[arg(long = "out", default_value = "reports")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suites = match cli.suites {
        None => Ok(Suite::ALL.to_vec()),
        Some(names) => names
            .iter()
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(str::parse::<Suite>)
            .collect(),
    };
    let suites = match suites {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cfg = RunConfig {
        q: cli.q,
        tol: cli.tol,
        tol_quad: cli.tol_quad,
        max_exponent: cli.max_exponent,
        max_terms: cli.max_terms,
        suites,
        out_dir: cli.out,
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Both => Format::Both,
        },
    };
    match run(&cfg) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for s in &out.summary {
                println!("{:<14} {:>5} rows {:>4} failed  {}", s.suite.name(), s.rows, s.failed, s.verdict);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
