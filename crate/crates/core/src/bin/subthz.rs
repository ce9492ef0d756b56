fn main() {
    std::process::exit(subthz::cli::main_with_args(std::env::args_os()));
}
