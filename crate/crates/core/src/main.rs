fn main() {
    std::process::exit(zeta_extremal::cli::run(std::env::args_os()));
}
