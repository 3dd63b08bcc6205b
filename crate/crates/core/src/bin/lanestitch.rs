fn main() {
    std::process::exit(lanestitch::cli::main_from_args(std::env::args_os()));
}
