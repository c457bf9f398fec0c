use clap::Parser;

fn main() {
    let cli = rotnet_cli::Cli::parse();
    if let Err(e) = rotnet_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
