use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, err, code) = hlf::run_args(std::env::args_os());
    if !out.is_empty() {
        println!("{}", out.trim_end());
    }
    if !err.is_empty() {
        let _ = write!(std::io::stderr(), "{err}");
    }
    ExitCode::from(code as u8)
}
