fn main() {
    std::process::exit(kacfta::cli::run(std::env::args_os()));
}
