fn main() {
    std::process::exit(flatnorm::cli::run_from(std::env::args_os()));
}
