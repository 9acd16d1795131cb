fn main() {
    std::process::exit(pharmonic::cli::run(std::env::args()));
}
