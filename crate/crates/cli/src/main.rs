fn main() {
    std::process::exit(hodge_spectra_cli::run(std::env::args_os()));
}
