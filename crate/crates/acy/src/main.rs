fn main() {
    std::process::exit(acy::cli::main_with_args(std::env::args_os()));
}
