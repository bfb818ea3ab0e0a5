fn main() {
    std::process::exit(bellosc::cli::run(std::env::args_os()));
}
