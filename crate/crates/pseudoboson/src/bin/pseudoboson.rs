fn main() {
    std::process::exit(pseudoboson::cli::run_main());
}
