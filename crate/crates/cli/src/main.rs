use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = binomial_moments_cli::Cli::parse();
    binomial_moments_cli::run(cli)
}
