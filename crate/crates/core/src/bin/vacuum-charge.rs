use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use vacuum_charge::report::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("VACUUM_CHARGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli) {
        Ok(Some(artifact)) => {
            let _ = std::io::stdout().write_all(artifact.text.as_bytes());
            if artifact.failures > 0 {
                eprintln!("numerics: {} row(s) outside tolerance", artifact.failures);
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
