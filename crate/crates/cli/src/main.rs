use std::process::ExitCode;

fn main() -> ExitCode {
    wdl_cli::run(std::env::args_os())
}
