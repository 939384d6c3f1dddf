//! `subsyscode`: command-line front end for subsystem-code simulations.
//!
//! Exit status: 0 on success, 2 for usage errors (unknown subcommand, bad or
//! missing values), 3 when a request is valid but too large to run (exact
//! diagonalization beyond its bound), 1 for I/O failures.

mod commands;
mod operator_input;
mod run;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    BifurcationArgs, CodeInfoArgs, DiagArgs, IsingArgs, MeanFieldArgs, OperatorArgs, ThresholdArgs,
};
use operator_input::SYNTAX_HELP;
use run::Common;

#[derive(Parser)]
#[command(
    name = "subsyscode",
    version,
    about = "Subsystem codes on square and cubic lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sites, generator counts and logical operator supports
    CodeInfo {
        #[command(flatten)]
        args: CodeInfoArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Gauge / logical / detectable class of an operator
    #[command(after_help = SYNTAX_HELP)]
    Classify {
        #[command(flatten)]
        args: OperatorArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Syndrome, correction and residual class of an error
    #[command(after_help = SYNTAX_HELP)]
    Decode {
        #[command(flatten)]
        args: OperatorArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo failure rates over (n, p); writes threshold.csv
    Threshold {
        #[command(flatten)]
        args: ThresholdArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sector-resolved exact spectrum of the 2D bond Hamiltonian
    Diag {
        #[command(flatten)]
        args: DiagArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Mean-field energy cost of an error on the 3D code
    #[command(after_help = SYNTAX_HELP)]
    Meanfield {
        #[command(flatten)]
        args: MeanFieldArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Magnetization series of 1D/2D Ising memories; writes ising.csv
    Ising {
        #[command(flatten)]
        args: IsingArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Order parameter of the 3D mean-field model against temperature;
    /// writes bifurcation.csv
    Bifurcation {
        #[command(flatten)]
        args: BifurcationArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::CodeInfo { args, common } => commands::code_info(args, common),
        Command::Classify { args, common } => commands::classify(args, common),
        Command::Decode { args, common } => commands::decode_cmd(args, common),
        Command::Threshold { args, common } => commands::threshold(args, common),
        Command::Diag { args, common } => commands::diag(args, common),
        Command::Meanfield { args, common } => commands::meanfield(args, common),
        Command::Ising { args, common } => commands::ising(args, common),
        Command::Bifurcation { args, common } => commands::bifurcation(args, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
