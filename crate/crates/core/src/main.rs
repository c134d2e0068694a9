fn main() {
    std::process::exit(veto_delegation::cli::main());
}
