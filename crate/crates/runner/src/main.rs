fn main() {
    std::process::exit(polarlp_runner::cli::run(std::env::args_os()));
}
