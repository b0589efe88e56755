//! `srtlab`: systemic risk measures on interbank networks and Monte Carlo
//! runs of the agent-based model under different interbank taxes.

mod meta;
mod network;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "srtlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-bank DebtRank, value weight and expected systemic loss as CSV.
    ///
    /// Fails on unreadable or malformed input files, unknown bank ids in the
    /// edge file, negative amounts, self-edges and default probabilities
    /// outside [0, 1).
    Debtrank(network::DebtRankArgs),
    /// Marginal systemic effect of every liability as CSV.
    ///
    /// Fails on the same input errors as `debtrank`.
    Marginal(network::MarginalArgs),
    /// Systemic risk tax quote for one prospective loan as JSON.
    ///
    /// Fails on input errors, unknown or equal debtor and creditor ids, a
    /// negative amount, a non-positive term, zeta outside (0, 1] and a
    /// negative rate.
    Quote(network::QuoteArgs),
    /// Monte Carlo batch in one tax regime: effective config, per-run
    /// records and a batch summary.
    ///
    /// Fails on an unreadable or invalid config, unknown config fields,
    /// zero runs and an unwritable output directory.
    Simulate(simulate::SimulateArgs),
    /// The same batch under every tax regime with shared seeds, plus
    /// side-by-side histograms.
    ///
    /// Fails on the same errors as `simulate`.
    Compare(simulate::CompareArgs),
    /// Synthetic scale-free network in the ingestion format.
    ///
    /// Fails on fewer than two banks, invalid distribution parameters and
    /// unwritable output paths.
    Generate(network::GenerateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Debtrank(a) => network::debtrank(a),
        Command::Marginal(a) => network::marginal(a),
        Command::Quote(a) => network::quote(a),
        Command::Simulate(a) => simulate::simulate(a),
        Command::Compare(a) => simulate::compare(a),
        Command::Generate(a) => network::generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
