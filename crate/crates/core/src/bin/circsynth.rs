fn main() {
    std::process::exit(circsynth::cli::run(std::env::args_os()));
}
