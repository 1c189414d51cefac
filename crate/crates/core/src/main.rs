use std::process::ExitCode;

use spacelike::cli::{parse_config, run_command};

fn main() -> ExitCode {
    let cfg = match parse_config(std::env::args_os().skip(1)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(64);
        }
    };
    match run_command(&cfg) {
        Ok(summary) => {
            println!("{}", summary.message);
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
