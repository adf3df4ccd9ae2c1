fn main() {
    std::process::exit(bundlechoice::cli::main_with_args(std::env::args_os()));
}
