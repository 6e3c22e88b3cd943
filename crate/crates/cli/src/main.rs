use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match twistring_cli::parse_args(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(e) => {
            if e.code == twistring_cli::EXIT_OK {
                print!("{e}");
            } else {
                eprint!("{e}");
                if !e.message.ends_with('\n') {
                    eprintln!();
                }
            }
            return ExitCode::from(e.code as u8);
        }
    };
    match twistring_cli::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.code == twistring_cli::EXIT_OK => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
