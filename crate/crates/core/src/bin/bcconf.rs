fn main() {
    std::process::exit(bcconf::cli::main_with_args(std::env::args_os()));
}
