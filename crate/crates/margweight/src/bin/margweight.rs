fn main() {
    std::process::exit(margweight::cli::run(std::env::args_os()));
}
