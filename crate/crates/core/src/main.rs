fn main() {
    std::process::exit(hopfcyclic::cli::run(std::env::args_os()));
}
