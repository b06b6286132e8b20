fn main() {
    std::process::exit(qcut::cli::main_with_args(std::env::args_os()));
}
