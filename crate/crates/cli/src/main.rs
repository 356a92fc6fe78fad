mod args;
mod commands;
mod play;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Ctx, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let json = cli.json;
    let result = {
        let mut ctx = Ctx { json, budget: cli.window_budget, out: &mut out };
        match &cli.command {
            Command::Threshold(a) => commands::threshold(&mut ctx, a),
            Command::Signs(a) => commands::signs(&mut ctx, a),
            Command::Translate(a) => commands::translate(&mut ctx, a),
            Command::Coloring(a) => commands::coloring(&mut ctx, a),
            Command::Witness(a) => commands::witness(&mut ctx, a),
            Command::Maximal(a) => commands::maximal(&mut ctx, a),
            Command::Simulate(a) => commands::simulate(&mut ctx, a),
            Command::Play(a) => {
                let stdin = io::stdin();
                play::play(a, cli.window_budget, &mut stdin.lock(), &mut out)
            }
        }
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json {
                if let Failure::Verification(msg, detail) = &e {
                    let doc = serde_json::json!({ "error": msg, "detail": detail });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
                }
            }
            eprintln!("balgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
