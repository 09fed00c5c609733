mod instance;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fi_jordan::analysis::DEFAULT_BUDGET;
use fi_jordan::search::MAX_SEARCH_RANK;

use instance::{load_instance, Instance};
use report::{Command, Options, RunError, DEFAULT_SEED, DEFAULT_TRIALS};

const EXIT_INPUT: u8 = 1;
const EXIT_BUDGET: u8 = 2;

/// Derivations and Jordan derivations of finitary incidence rings over finite rings.
#[derive(Parser)]
#[command(name = "fi-jordan", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for the derivation space of the target ring.
    SolveDer(Common),
    /// Solve for the Jordan derivation space of the target ring.
    SolveJder(Common),
    /// Compare the two spaces and report a witness if they differ.
    Compare(Common),
    /// Assemble FI(P, R) and check its class idempotents.
    FiBuild(Common),
    /// Structural verdict from the preorder and coefficient ring.
    Verdict(Common),
    /// Verdict plus direct solving of FI(P, R) and R.
    CrossCheck(Common),
    /// Run the identity suite on every Jordan derivation generator.
    Identities(Common),
    /// Rebuild each Jordan derivation from its corner pieces.
    DprimeCheck(Common),
    /// Enumerate small rings looking for Jordan derivations that are not derivations.
    Search(Common),
    /// Run the command named in the instance's `[task]` table.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Instance file (TOML).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random trials per identity in the randomized suite.
    #[arg(long)]
    trials: Option<usize>,
    /// Largest ring rank the solvers accept.
    #[arg(long)]
    budget: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock timing to the report.
    #[arg(long)]
    timing: bool,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (named, args) = match cli.command {
        Cmd::SolveDer(a) => (Some(Command::SolveDer), a),
        Cmd::SolveJder(a) => (Some(Command::SolveJder), a),
        Cmd::Compare(a) => (Some(Command::Compare), a),
        Cmd::FiBuild(a) => (Some(Command::FiBuild), a),
        Cmd::Verdict(a) => (Some(Command::Verdict), a),
        Cmd::CrossCheck(a) => (Some(Command::CrossCheck), a),
        Cmd::Identities(a) => (Some(Command::Identities), a),
        Cmd::DprimeCheck(a) => (Some(Command::DprimeCheck), a),
        Cmd::Search(a) => (Some(Command::Search), a),
        Cmd::Run(a) => (None, a),
    };

    let inst = match &args.input {
        Some(path) => match load_instance(path) {
            Ok(inst) => inst,
            Err(e) => return fail(EXIT_INPUT, e),
        },
        None if named == Some(Command::Search) => Instance::default(),
        None => return fail(EXIT_INPUT, "--input is required"),
    };

    let command = match named {
        Some(c) => c,
        None => match inst.task.command.as_deref() {
            Some(name) => match Command::parse(name) {
                Some(c) => c,
                None => return fail(EXIT_INPUT, format!("invalid `task.command`: unknown command `{name}`")),
            },
            None => return fail(EXIT_INPUT, "`run` needs `task.command` in the instance"),
        },
    };

    let opts = Options {
        seed: args.seed.or(inst.task.seed).unwrap_or(DEFAULT_SEED),
        trials: args.trials.or(inst.task.trials).unwrap_or(DEFAULT_TRIALS),
        budget: args.budget.or(inst.task.budget).unwrap_or(DEFAULT_BUDGET),
        moduli: inst.task.moduli.clone().unwrap_or_else(|| vec![2, 3, 4]),
        max_rank: inst.task.max_rank.unwrap_or(MAX_SEARCH_RANK),
    };

    let start = Instant::now();
    let results = match report::run(command, &inst, &opts) {
        Ok(r) => r,
        Err(e @ RunError::Budget { .. }) => return fail(EXIT_BUDGET, e),
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let mut doc = report::report(command, &inst, &opts, results);
    if args.timing {
        doc["timing_ms"] = serde_json::json!(start.elapsed().as_secs_f64() * 1000.0);
    }

    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    let written = match &args.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_INPUT, format!("cannot write report: {e}")),
    }
}
