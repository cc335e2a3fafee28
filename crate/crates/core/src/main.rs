fn main() {
    std::process::exit(lifshits::cli::main_from_args(std::env::args_os()));
}
