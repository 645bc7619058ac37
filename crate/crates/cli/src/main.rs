//! `antiwick`: runs the verification suites and writes JSON or CSV reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! invalid configuration.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use antiwick::suite::{self, Format, RunConfig};
use antiwick::Error;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "antiwick", version, about = "Anti-Wick calculus verification runner")]
struct Cli {
    /// Number of grid cells (Gaussian modes).
    #[arg(short = 'm', long, global = true, default_value_t = 8)]
    grid_size: usize,
    /// Chaos order cap.
    #[arg(short = 'N', long, global = true, default_value_t = 12)]
    order: usize,
    /// Time horizon.
    #[arg(short = 'T', long, global = true, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Report destination; standard output when absent.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product identities over seeded random chaos inputs.
    Identities,
    /// Heat-equation representation checks.
    Heat {
        /// Initial datum: x^k, monomial:k, poly:c0,c1,..., cos or exp.
        #[arg(long = "f")]
        f: String,
        /// Comma-separated times; each becomes a grid node.
        #[arg(long = "t", value_delimiter = ',', required = true, allow_negative_numbers = true)]
        t: Vec<f64>,
        /// Write (t, x, u) samples of the solution as CSV.
        #[arg(long)]
        emit_curve: Option<PathBuf>,
    },
    /// Time products over a sweep of grid sizes and order caps.
    Bench,
}

fn run(cli: &Cli) -> Result<(String, bool), Error> {
    let cfg = RunConfig {
        grid_size: cli.grid_size,
        order: cli.order,
        horizon: cli.horizon,
        seed: cli.seed,
        samples: cli.samples,
        tolerance: cli.tolerance,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    cfg.validate()?;
    let render = |r: antiwick::report::Report| {
        let pass = r.all_pass;
        let text = match cfg.format {
            Format::Json => r.to_json(),
            Format::Csv => r.to_csv(),
        };
        (text, pass)
    };
    match &cli.command {
        Command::Identities => Ok(render(suite::identities(&cfg)?)),
        Command::Heat { f, t, emit_curve } => {
            let report = suite::heat(&cfg, f, t)?;
            if let Some(path) = emit_curve {
                let curve = suite::heat_curve(f, t, antiwick::heat::DEFAULT_NODES)?;
                fs::write(path, curve)
                    .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(render(report))
        }
        Command::Bench => {
            let rows = suite::bench(&cfg)?;
            let text = match cfg.format {
                Format::Json => suite::bench_json(&rows),
                Format::Csv => suite::bench_csv(&rows),
            };
            Ok((text, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, pass) = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
