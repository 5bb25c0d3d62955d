//! `santalo-lab`: command-line driver for the volume-product experiments.
//!
//! Every subcommand prints a JSON summary on stdout. With `--out DIR` the
//! summary is also written to `DIR/summary.json`, next to the subcommand's
//! CSV tables and body files. Exit status: 0 on success, 1 when a numerical
//! procedure fails to converge, 2 on invalid input.

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;

use santalo_core::Error;

use crate::args::BodyArgs;
use crate::commands::{CertifyArgs, EllipsoidTestArgs, FlowArgs, PolarArgs, ProbeArgs, ProfileArgs, SymmetrizeArgs};
use crate::output::Output;

#[derive(Parser, Debug)]
#[command(name = "santalo-lab", version, about = "Polar bodies, Santaló points and Steiner symmetrization in 2D and 3D")]
struct Cli {
    /// Directory receiving summary.json and the CSV/body artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exact rational arithmetic for planar bodies (product, polar).
    #[arg(long, global = true)]
    rational: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a body and emit it in the JSON body format.
    Gen(BodyArgs),
    /// Volume product |K|·|K^s(K)| at the Santaló point.
    Product(BodyArgs),
    /// Polar body about a pole (default: the Santaló point).
    Polar(PolarArgs),
    /// Santaló point: the minimizer of the polar volume.
    Santalo(BodyArgs),
    /// Steiner symmetral, or any member of the Steiner family.
    Symmetrize(SymmetrizeArgs),
    /// f(t) = (|K|·|K_t*|)⁻¹ along the Steiner family, with convexity statistics.
    Profile(ProfileArgs),
    /// Constancy and shear-rigidity certificate for the Steiner family.
    Certify(CertifyArgs),
    /// Chord-midpoint coplanarity test for ellipsoids.
    EllipsoidTest(EllipsoidTestArgs),
    /// Iterated Steiner symmetrization along random directions.
    Flow(FlowArgs),
    /// Greedy search for perturbations that raise the volume product.
    Probe(ProbeArgs),
}

/// Nonzero exit statuses.
const EXIT_NO_CONVERGENCE: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("SANTALO_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::BadSpec(format!("SANTALO_LAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Numerical(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Error> {
    configure_threads()?;
    let mut out = Output::new(cli.out);
    let r = cli.rational;
    let (summary, ok) = match &cli.command {
        Command::Gen(a) => (commands::gen(a, &mut out)?, true),
        Command::Product(a) => (commands::product(a, r, &mut out)?, true),
        Command::Polar(a) => (commands::polar_cmd(a, r, &mut out)?, true),
        Command::Santalo(a) => (commands::santalo(a, &mut out)?, true),
        Command::Symmetrize(a) => (commands::symmetrize(a, &mut out)?, true),
        Command::Profile(a) => (commands::profile(a, &mut out)?, true),
        Command::Certify(a) => (commands::certify(a, &mut out)?, true),
        Command::EllipsoidTest(a) => (commands::ellipsoid(a, &mut out)?, true),
        Command::Flow(a) => commands::flow(a, &mut out)?,
        Command::Probe(a) => (commands::probe(a, &mut out)?, true),
    };
    out.finish(&summary)?;
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.rational && !matches!(cli.command, Command::Product(_) | Command::Polar(_)) {
        log::warn!("--rational only affects `product` and `polar`; ignored");
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            error!("flow stopped early; partial trace written");
            ExitCode::from(EXIT_NO_CONVERGENCE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    if e.is_convergence_failure() {
        EXIT_NO_CONVERGENCE
    } else {
        EXIT_INPUT
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use santalo_core::Vector;

    #[test]
    fn solver_failures_exit_with_one() {
        let e = Error::NoConvergence {
            best: Vector::new2(0.0, 0.0),
            residual: 1e-3,
            iterations: 500,
        };
        assert_eq!(exit_status(&e), 1);
        assert_eq!(exit_status(&e.at_parameter(0.5)), 1);
        assert_eq!(exit_status(&Error::Numerical("singular".into())), 1);
    }

    #[test]
    fn input_errors_exit_with_two() {
        assert_eq!(exit_status(&Error::BadSpec("m".into())), 2);
        assert_eq!(exit_status(&Error::DegenerateInput("flat".into())), 2);
        assert_eq!(
            exit_status(&Error::Parse {
                location: "line 1, column 2".into(),
                message: "x".into()
            }),
            2
        );
    }
}
