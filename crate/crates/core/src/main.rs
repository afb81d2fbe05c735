fn main() {
    std::process::exit(projsolve::cli::main_with_args(std::env::args_os()));
}
