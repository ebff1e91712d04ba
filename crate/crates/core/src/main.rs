fn main() {
    std::process::exit(invexp::cli::run());
}
