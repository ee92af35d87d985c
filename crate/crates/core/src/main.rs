use std::process::ExitCode;

fn main() -> ExitCode {
    greyfc::cli::main()
}
