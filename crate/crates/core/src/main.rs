fn main() {
    std::process::exit(dispersion::cli::run(std::env::args_os()));
}
