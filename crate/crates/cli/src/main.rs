//! `surfcover`: covers of rationally parametrized surfaces.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 hypotheses not
//! satisfied, 3 internal algebra or verification failure.

mod commands;
mod json;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use commands::{Command, Outcome};

#[derive(Parser, Debug)]
#[command(name = "surfcover", version, about = "Covers of rationally parametrized surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn run(cli: Cli) -> Outcome {
    let result = match &cli.command {
        Command::Check(c) => commands::check(c),
        Command::Cover3(c) => commands::cover3(c),
        Command::Cover2 { common, beta_rule } => commands::cover2(common, *beta_rule),
        Command::Verify { common, beta_rule, trials } => commands::verify(common, *beta_rule, *trials),
    };
    result.unwrap_or_else(commands::Failure::into_outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = run(cli);
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
