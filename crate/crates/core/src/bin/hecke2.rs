use clap::Parser;

fn main() {
    let cli = hecke2::cli::Cli::parse();
    std::process::exit(hecke2::cli::main_with(cli));
}
