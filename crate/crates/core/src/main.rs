fn main() {
    std::process::exit(bbops::cli::run(std::env::args_os()));
}
