use std::process::ExitCode;

use rcft_cli::args::parse_args;
use rcft_cli::execute;

fn main() -> ExitCode {
    let spec = match parse_args(std::env::args_os()) {
        Ok(spec) => spec,
        // clap prints help/version on stdout (exit 0) and usage errors on stderr (exit 2)
        Err(e) => e.exit(),
    };
    match execute(&spec) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rcft-sim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
