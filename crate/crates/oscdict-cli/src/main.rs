use clap::Parser;

fn main() {
    let cli = oscdict_cli::Cli::parse();
    std::process::exit(oscdict_cli::run(cli));
}
