fn main() {
    std::process::exit(structured_spectra_cli::run(std::env::args_os()));
}
