use clap::Parser;

use modesplit::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
