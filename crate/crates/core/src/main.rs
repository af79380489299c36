fn main() {
    std::process::exit(coeffgap::cli::run());
}
