use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = isoforge::cli::run(std::env::args().skip(1));
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.report.as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.exit_code as u8)
}
