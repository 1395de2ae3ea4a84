fn main() {
    std::process::exit(chronoscale::cli::run(std::env::args_os()));
}
