fn main() {
    std::process::exit(gmcheck::cli::run());
}
