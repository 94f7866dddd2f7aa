use clap::Parser;

fn main() {
    std::process::exit(linsec::cli::run(linsec::cli::Cli::parse()));
}
