fn main() {
    std::process::exit(coste::cli::main_with_args(std::env::args_os()));
}
