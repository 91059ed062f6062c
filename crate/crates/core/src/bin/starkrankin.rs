fn main() {
    std::process::exit(starkrankin::cli::run(std::env::args_os()));
}
