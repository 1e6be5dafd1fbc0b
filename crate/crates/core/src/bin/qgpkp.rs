fn main() {
    std::process::exit(qgpkp::cli::run(std::env::args_os()));
}
