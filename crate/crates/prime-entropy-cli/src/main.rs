use clap::Parser;

use prime_entropy_cli::{execute, Cli};

fn main() {
    // Clap itself exits 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
