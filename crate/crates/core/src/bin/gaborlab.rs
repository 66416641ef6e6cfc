fn main() {
    std::process::exit(gaborlab::cli::run(std::env::args_os()));
}
