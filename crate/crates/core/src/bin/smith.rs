fn main() {
    std::process::exit(smith_embedding::cli::run(std::env::args_os()));
}
