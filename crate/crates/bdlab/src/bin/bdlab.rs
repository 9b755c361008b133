fn main() {
    std::process::exit(bdlab::cli::main_with_args(std::env::args_os()));
}
