fn main() {
    std::process::exit(polartrack::cli::main_from(std::env::args_os()));
}
