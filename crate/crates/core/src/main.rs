fn main() {
    std::process::exit(pdm_spectra::cli::run(std::env::args_os()));
}
