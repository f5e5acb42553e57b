fn main() {
    std::process::exit(dstar_cli::run(std::env::args_os()));
}
