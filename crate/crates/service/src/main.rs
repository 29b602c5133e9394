fn main() {
    std::process::exit(crux_service::cli::main());
}
