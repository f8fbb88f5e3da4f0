fn main() {
    std::process::exit(piq4::cli::run());
}
