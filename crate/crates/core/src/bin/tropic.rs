fn main() {
    std::process::exit(tropic::cli::main());
}
