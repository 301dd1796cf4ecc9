fn main() {
    std::process::exit(angle_realize_cli::run_cli(std::env::args_os()));
}
