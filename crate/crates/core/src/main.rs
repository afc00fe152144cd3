fn main() {
    std::process::exit(radokit::cli::main_with_args(std::env::args_os()));
}
