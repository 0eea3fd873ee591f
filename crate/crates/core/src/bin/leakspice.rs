fn main() {
    std::process::exit(leakspice::cli::run(std::env::args_os()));
}
