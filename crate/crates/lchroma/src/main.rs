use std::process::ExitCode;

fn main() -> ExitCode {
    lchroma::cli::run(std::env::args_os())
}
