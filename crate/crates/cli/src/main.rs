use std::process;

use clap::error::ErrorKind;
use clap::Parser;

use quasistatic::args::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            // Collapse clap's report to one line: everything before the usage block.
            let text = e.render().to_string();
            let summary: Vec<&str> = text
                .lines()
                .take_while(|l| !l.trim().is_empty() && !l.starts_with("Usage:"))
                .map(str::trim)
                .collect();
            eprintln!("{}", summary.join(" "));
            process::exit(2);
        }
    };
    if let Err(e) = quasistatic::run(cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code());
    }
}
