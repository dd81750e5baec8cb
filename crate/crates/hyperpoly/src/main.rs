use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = hyperpoly::cli::run_args(std::env::args_os());
    if outcome.exit_code == 2 {
        eprint!("{}", outcome.report);
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.report.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(outcome.exit_code as u8)
}
