fn main() {
    std::process::exit(normflow::cli::main_with_args(std::env::args_os()));
}
