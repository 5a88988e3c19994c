use std::process::ExitCode;

fn main() -> ExitCode {
    densecode::cli::main_with_args()
}
