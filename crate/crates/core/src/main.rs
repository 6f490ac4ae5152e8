fn main() {
    std::process::exit(finclass::cli::main_with(std::env::args_os()));
}
