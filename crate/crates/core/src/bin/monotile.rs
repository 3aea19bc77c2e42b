fn main() {
    std::process::exit(monotile::cli::main());
}
