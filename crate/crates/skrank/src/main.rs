fn main() {
    std::process::exit(skrank::cli::main_with_args(std::env::args_os()));
}
