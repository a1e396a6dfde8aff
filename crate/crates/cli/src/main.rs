use std::process::ExitCode;

fn main() -> ExitCode {
    fuzzy_refine_cli::run(std::env::args_os())
}
