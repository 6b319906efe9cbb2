fn main() {
    std::process::exit(sepcheck::cli::run());
}
