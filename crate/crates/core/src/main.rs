fn main() {
    std::process::exit(deplen::cli::main());
}
