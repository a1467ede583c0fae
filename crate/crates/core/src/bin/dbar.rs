use clap::Parser;

fn main() {
    std::process::exit(dbar::cli::run(dbar::cli::Cli::parse()));
}
