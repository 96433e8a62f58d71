fn main() {
    std::process::exit(paraprod_cli::run_cli(std::env::args_os()));
}
