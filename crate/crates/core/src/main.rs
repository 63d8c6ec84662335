fn main() {
    std::process::exit(bandkern::cli::main_with_args(std::env::args_os()));
}
