fn main() {
    std::process::exit(holomorphic_morse::cli::main_with_args(std::env::args_os()));
}
