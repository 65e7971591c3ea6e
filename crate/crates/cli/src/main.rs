use std::io;
use std::process::ExitCode;

use clap::Parser;

use unifit_cli::{run, Cli, ERROR_CODE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR_CODE } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match run(cli, &mut out, &mut err) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR_CODE)
        }
    }
}
