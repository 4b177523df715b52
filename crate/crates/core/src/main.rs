fn main() {
    std::process::exit(newcomb::cli::main_with_args(std::env::args_os()));
}
