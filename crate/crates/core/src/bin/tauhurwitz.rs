fn main() {
    std::process::exit(tauhurwitz::cli::run(std::env::args_os()));
}
