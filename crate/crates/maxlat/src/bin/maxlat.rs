fn main() {
    std::process::exit(maxlat::cli::run_command(std::env::args()));
}
