// SPDX-License-Identifier: Apache-2.0

mod args;
mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliResult;

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Diff {
            before,
            after,
            format,
            syntax,
        } => commands::diff_cmd(&before, &after, format, syntax),
        Command::Apply {
            before,
            script,
            format,
            syntax,
        } => commands::apply_cmd(&before, &script, format, syntax),
        Command::Ingest {
            corpus,
            out,
            radius,
            max_nodes,
            split,
            seed,
        } => commands::ingest_cmd(&corpus, &out, radius, max_nodes, &split, seed),
        Command::Train(a) => commands::train_cmd(&a),
        Command::Predict {
            checkpoint,
            examples,
            emit,
            index,
        } => commands::predict_cmd(&checkpoint, &examples, emit, index),
        Command::Evaluate {
            checkpoint,
            dataset,
            split,
        } => commands::evaluate_cmd(&checkpoint, &dataset, split.as_deref()),
        Command::Stats { dataset, pretty } => commands::stats_cmd(&dataset, pretty),
        Command::Generate {
            out,
            families,
            count,
            projects,
            seed,
            held_out,
            list,
        } => commands::generate_cmd(
            out.as_deref(),
            &families,
            count,
            projects,
            seed,
            held_out,
            list,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
