fn main() {
    std::process::exit(md5fol::cli::run());
}
