fn main() {
    std::process::exit(entkit::cli::main_with(std::env::args_os()));
}
