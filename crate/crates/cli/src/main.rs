fn main() {
    std::process::exit(precover_cli::run(std::env::args_os()));
}
