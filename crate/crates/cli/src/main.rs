//! `prunekit`: generate instances, prune, evaluate containment, sweep,
//! check objective properties and run the separation study.
//!
//! Exit codes: 0 success, 2 configuration error, 3 enumeration guard
//! exceeded, 4 input parse error. Failures also print one JSON error record
//! on stderr.

mod args;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit code plus message for a failed run.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "config",
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            kind: "parse",
            message: message.into(),
        }
    }
}

impl From<prunekit_core::Error> for Failure {
    fn from(e: prunekit_core::Error) -> Self {
        use prunekit_core::Error as E;
        let (code, kind) = match &e {
            E::GuardExceeded { .. } => (3, "guard"),
            E::Parse { .. } | E::Io { .. } => (4, "parse"),
            _ => (2, "config"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<prunekit_core::Error>() {
            Ok(core) => core.into(),
            Err(other) => Failure {
                code: 4,
                kind: "io",
                message: format!("{other:#}"),
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Prune(a) => commands::prune(a),
        Command::Eval(a) => commands::eval(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Check(a) => commands::check(a),
        Command::Separation(a) => commands::separation(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let record = serde_json::json!({
                "error": f.kind,
                "exit_code": f.code,
                "message": f.message,
            });
            eprintln!("{record}");
            ExitCode::from(f.code)
        }
    }
}
