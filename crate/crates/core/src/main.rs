fn main() {
    std::process::exit(infomarket::cli::main_with(std::env::args_os()));
}
