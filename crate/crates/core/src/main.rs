use clap::Parser;

fn main() {
    let cli = ssvdf::cli::Cli::parse();
    std::process::exit(ssvdf::cli::run(cli));
}
