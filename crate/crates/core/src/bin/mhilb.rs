fn main() {
    std::process::exit(mhilb::cli::main_with_args(std::env::args_os()));
}
