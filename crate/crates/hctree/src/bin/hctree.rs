fn main() {
    std::process::exit(hctree::cli::run());
}
