fn main() {
    std::process::exit(laguerre_lp::cli::main_with_args(std::env::args_os()));
}
