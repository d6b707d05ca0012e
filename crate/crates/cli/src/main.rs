use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = hamming_qubit_cli::main_with_args(std::env::args_os(), &mut out, &mut io::stderr());
    ExitCode::from(code as u8)
}
