fn main() {
    std::process::exit(stabtopo::cli::run(std::env::args_os()));
}
