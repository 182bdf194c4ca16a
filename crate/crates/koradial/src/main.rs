fn main() {
    std::process::exit(koradial::cli::main_with(std::env::args_os()));
}
