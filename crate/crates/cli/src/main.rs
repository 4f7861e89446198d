use clap::Parser;
use mfdfa_cli::app::{execute, Cli};

fn main() {
    std::process::exit(execute(Cli::parse()));
}
