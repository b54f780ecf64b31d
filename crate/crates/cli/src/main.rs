fn main() {
    std::process::exit(multiport_cli::run(std::env::args_os()));
}
