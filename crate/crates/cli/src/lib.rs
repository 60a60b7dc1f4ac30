//! Command-line driver: batch discovery runs and the heuristic comparison.

pub mod args;
pub mod batch;
pub mod compare;
pub mod error;
pub mod load;
pub mod output;

use clap::Parser;

use args::{Cli, Command};
use error::exit;

/// Parses `argv`, runs the command and returns the process status. Errors
/// are reported on stderr as one line.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::INVALID
            } else {
                exit::OK
            };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => batch::run(a),
        Command::Compare(a) => batch::compare(a),
    };
    match result {
        Ok(code) => {
            if code == exit::EMPTY {
                eprintln!("subdisc: no rules found");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
