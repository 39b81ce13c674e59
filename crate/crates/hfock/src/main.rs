fn main() {
    std::process::exit(hfock::cli::run(std::env::args_os()));
}
