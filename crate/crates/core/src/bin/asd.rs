fn main() {
    std::process::exit(asd_core::cli::main_with_args(std::env::args_os()));
}
