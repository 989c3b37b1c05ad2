fn main() {
    std::process::exit(warmstart::cli::run(std::env::args_os()));
}
