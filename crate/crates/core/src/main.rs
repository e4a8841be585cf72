fn main() {
    std::process::exit(ptdirac::cli::main_with_args(std::env::args_os()));
}
