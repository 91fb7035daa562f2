fn main() {
    std::process::exit(matmoments::cli::main_with_args(std::env::args_os()));
}
