fn main() {
    std::process::exit(fblab::cli::main_with_args(std::env::args_os()));
}
