use clap::Parser;

use ypfa_cli::app::{execute, exit_status, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses 2 for usage errors; here 2 is reserved for numerical failures
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(exit_status(execute(&cli)));
}
