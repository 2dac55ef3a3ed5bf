use std::process::ExitCode;

use clap::Parser;
use dilog_cli::{run, Cli, OutputOpts};

#[derive(Parser, Debug)]
struct Top {
    #[command(flatten)]
    cli: Cli,
    #[command(flatten)]
    out: OutputOpts,
}

fn main() -> ExitCode {
    let top = Top::parse();
    match run(&top.cli, &top.out) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
