use std::process::ExitCode;

fn main() -> ExitCode {
    coset_spectra::cli::run()
}
