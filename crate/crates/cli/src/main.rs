fn main() {
    std::process::exit(loometric_cli::run(std::env::args_os()));
}
