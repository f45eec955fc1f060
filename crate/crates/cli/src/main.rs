fn main() {
    std::process::exit(crossres_cli::run(std::env::args_os()));
}
