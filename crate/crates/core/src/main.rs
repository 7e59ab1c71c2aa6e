fn main() {
    std::process::exit(recdioph::cli::run(std::env::args_os()));
}
