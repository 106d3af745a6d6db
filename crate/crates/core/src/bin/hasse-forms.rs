fn main() {
    std::process::exit(hasse_forms::cli::run());
}
