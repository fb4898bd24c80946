fn main() {
    std::process::exit(wittkit_cli::run(std::env::args_os()));
}
