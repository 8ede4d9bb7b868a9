use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    chebdeg::cli::main_with_args(std::env::args_os())
}
