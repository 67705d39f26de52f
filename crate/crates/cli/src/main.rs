use std::process::ExitCode;

fn main() -> ExitCode {
    lamop_cli::app::main_with(std::env::args_os())
}
