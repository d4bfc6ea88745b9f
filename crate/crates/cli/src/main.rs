fn main() {
    std::process::exit(ultracone_cli::args::main_with(std::env::args_os()));
}
