fn main() {
    std::process::exit(groundwater_market::cli::main_with_args(std::env::args_os()));
}
