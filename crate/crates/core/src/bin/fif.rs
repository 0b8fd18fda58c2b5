fn main() {
    std::process::exit(nnfif::cli::run(std::env::args_os()));
}
