fn main() {
    concircle::cli::init_logging();
    std::process::exit(concircle::cli::run(std::env::args_os()));
}
