fn main() {
    std::process::exit(bifold_cli::run(std::env::args_os()));
}
