fn main() {
    std::process::exit(weil_charge::cli::run(std::env::args_os()));
}
