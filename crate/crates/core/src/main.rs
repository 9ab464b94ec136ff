fn main() {
    std::process::exit(kpsym::cli::run());
}
