fn main() {
    std::process::exit(fibpell::pipeline::run_cli(std::env::args_os()));
}
