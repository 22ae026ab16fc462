fn main() {
    std::process::exit(qdilog::cli::run(std::env::args_os()));
}
