use std::process::ExitCode;

fn main() -> ExitCode {
    chiral_cp::cli::main_entry()
}
