//! `otcss`: data sweeps for the OTCSS squeezed vacuum and the
//! closed-form-versus-oracle verification suite.
//!
//! Exit codes: 0 success, 1 invalid arguments or parameters, 2 a
//! verification check exceeded its tolerance, 3 I/O failure.

mod output;
mod range;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use otcss::verify::{self, Grid};
use otcss::OtcssParams;

use output::{Format, Table};
use range::{parse_axis, Axis};
use sweep::{BellAxes, FidelityMode};

const EXIT_VALIDATION: u8 = 1;
const EXIT_TOLERANCE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "otcss", version, about = "Sweeps and oracle checks for the OTCSS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Stamp the file with the current time (breaks byte-identical reruns).
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logarithmic negativity over a λ–γ grid.
    Negativity {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0:1.5:50")]
        lambda: Axis,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "-2:2:50")]
        gamma: Axis,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bell function over any combination of λ, γ, J, θ, φ.
    Bell {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0:1.2:50")]
        lambda: Axis,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0")]
        gamma: Axis,
        /// Displacement strength J = |α|² = |β|².
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0.01:0.5:50")]
        j: Axis,
        /// Phase of the mode-2 displacement.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "pi")]
        theta: Axis,
        /// Phase of the mode-1 displacement.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0")]
        phi: Axis,
        /// Write null wherever B ≤ 2.
        #[arg(long)]
        clip_at_2: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Teleportation fidelity over a λ–γ grid.
    Fidelity {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0:1.5:50")]
        lambda: Axis,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "-2:2:50")]
        gamma: Axis,
        /// Input squeezing; 0 is a coherent input.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, default_value = "0")]
        r: Axis,
        /// Report F(r) - F(0) instead of F(r).
        #[arg(long, conflicts_with = "vs_tsvs")]
        difference: bool,
        /// Report F(r) minus the two-mode squeezed vacuum channel's F(r).
        #[arg(long)]
        vs_tsvs: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare every closed form with the truncated Fock-space oracle.
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_CUTOFF)]
        cutoff: usize,
        #[arg(long, value_enum, default_value_t = GridArg::Coarse)]
        grid: GridArg,
        /// Replace the grid's λ values (value or min:max:steps).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, requires = "gamma")]
        lambda: Option<Axis>,
        /// Replace the grid's γ values (value or min:max:steps).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_axis, requires = "lambda")]
        gamma: Option<Axis>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridArg {
    Coarse,
    Fine,
}

enum Failure {
    Validation(String),
    Tolerance,
    Io(String),
}

impl From<otcss::Error> for Failure {
    fn from(e: otcss::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn emit(mut table: Table, out: &OutputArgs) -> Result<(), Failure> {
    if out.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.timestamp = Some(secs);
    }
    let text = table.render(out.format);
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run_verify(cutoff: usize, grid: GridArg, lambda: Option<Axis>, gamma: Option<Axis>) -> Result<(), Failure> {
    if cutoff < otcss::fock::MIN_EXPONENTIAL_CUTOFF {
        return Err(Failure::Validation(format!(
            "cutoff {cutoff} below the minimum {}",
            otcss::fock::MIN_EXPONENTIAL_CUTOFF
        )));
    }
    let points: Vec<OtcssParams> = match (lambda, gamma) {
        (Some(l), Some(g)) => {
            sweep::validate_params(&l, &g)?;
            sweep::cartesian(&[&l, &g])
                .iter()
                .map(|p| OtcssParams::new(p[0], p[1]))
                .collect::<otcss::Result<_>>()?
        }
        _ => match grid {
            GridArg::Coarse => Grid::Coarse.points(),
            GridArg::Fine => Grid::Fine.points(),
        },
    };

    let report = verify::run(&points, cutoff);
    println!("cutoff={} points={}", report.cutoff, report.points);
    for c in &report.checks {
        let Some((l, g)) = c.worst else {
            println!("SKIP {:<24} no parameter point could be evaluated", c.name);
            continue;
        };
        let worst = format!(" at lambda={l} gamma={g}");
        println!(
            "{} {:<24} max_deviation={:.3e} tolerance={:.0e}{}",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.max_deviation,
            c.tolerance,
            worst
        );
    }
    for ((l, g), e) in &report.failures {
        println!("FAIL {:<24} lambda={l} gamma={g}: {e}", "construction");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Tolerance)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Negativity { lambda, gamma, out } => emit(sweep::negativity(&lambda, &gamma)?, &out),
        Command::Bell {
            lambda,
            gamma,
            j,
            theta,
            phi,
            clip_at_2,
            out,
        } => {
            let axes = BellAxes {
                lambda: &lambda,
                gamma: &gamma,
                j: &j,
                theta: &theta,
                phi: &phi,
            };
            emit(sweep::bell(&axes, clip_at_2)?, &out)
        }
        Command::Fidelity {
            lambda,
            gamma,
            r,
            difference,
            vs_tsvs,
            out,
        } => {
            let mode = match (difference, vs_tsvs) {
                (true, _) => FidelityMode::Difference,
                (_, true) => FidelityMode::VsTsvs,
                _ => FidelityMode::Plain,
            };
            emit(sweep::fidelity(&lambda, &gamma, &r, mode)?, &out)
        }
        Command::Verify {
            cutoff,
            grid,
            lambda,
            gamma,
        } => run_verify(cutoff, grid, lambda, gamma),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Tolerance) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_TOLERANCE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
