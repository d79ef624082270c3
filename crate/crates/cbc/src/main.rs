fn main() {
    std::process::exit(cbc::cli::run());
}
