use clap::Parser;

fn main() {
    let cli = picard::cli::Cli::parse();
    std::process::exit(picard::cli::run(&cli));
}
