use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = nilform_cli::run_command(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(result.text.as_bytes());
    let _ = out.flush();
    ExitCode::from(result.status as u8)
}
