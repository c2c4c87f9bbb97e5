use clap::Parser;

fn main() {
    std::process::exit(rosenau_cli::run(rosenau_cli::Cli::parse()));
}
