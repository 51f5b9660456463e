use std::io;

use clap::Parser;
use spectra_core::cli::{run, Cli, RunConfig};

fn main() {
    let cfg = RunConfig::from(Cli::parse());
    let code = run(&cfg, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
