mod args;
mod commands;
mod json;
mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde::Serialize;

use args::{pick, Cli, Command, ConfigFile, SolveCommand, SweepArgs};
use commands::{Emitted, Failure, Outcome, Status};

const USAGE_ERROR: u8 = 2;

#[derive(Serialize)]
struct SweepBody {
    out: String,
    quantity: sweep::Quantity,
    n: usize,
    rows: usize,
    blank_cells: usize,
}

fn sweep_cmd(args: &SweepArgs, cfg: &ConfigFile) -> Outcome {
    let spec_path = pick(args.spec.clone(), cfg.spec.clone(), "spec")?;
    let out_path = pick(args.out.clone(), cfg.out.clone(), "out")?;
    let spec = sweep::SweepSpec::load(&spec_path)?;
    let cells = sweep::run(&spec)?;
    let io_failure = |e: &dyn std::fmt::Display| Failure::Runtime {
        kind: "io",
        message: format!("cannot write {}: {e}", out_path.display()),
    };
    let file = File::create(&out_path).map_err(|e| io_failure(&e))?;
    sweep::write_csv(&spec, &cells, BufWriter::new(file)).map_err(|e| io_failure(&e))?;
    let body = SweepBody {
        out: out_path.display().to_string(),
        quantity: spec.quantity,
        n: spec.n,
        rows: cells.len(),
        blank_cells: cells.iter().filter(|c| c.value.is_none()).count(),
    };
    Ok(Emitted {
        json: json::document("sweep", body),
        status: Status::Ok,
    })
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Geometry(a) => commands::geometry(a, &cfg),
        Command::Solve(SolveCommand::Ball(a)) => commands::solve_ball(a, &cfg),
        Command::Solve(SolveCommand::Annulus(a)) => commands::solve_annulus(a, &cfg),
        Command::Verify(a) => commands::verify(a, &cfg),
        Command::Sweep(a) => sweep_cmd(a, &cfg),
        Command::Compat(a) => commands::compat(a, &cfg),
        Command::Counterexample(a) => commands::counterexample_cmd(a, &cfg),
    }
}

fn print(json: &str) {
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = writeln!(stdout, "{json}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_ERROR,
            };
            let _ = e.print();
            let rendered = e.render().to_string();
            if code != 0 && !rendered.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(Emitted { json, status }) => {
            print(&json);
            ExitCode::from(status.code())
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Runtime { kind, message }) => {
            print(&commands::error_document(kind, &message));
            ExitCode::from(Status::NumericError.code())
        }
    }
}
