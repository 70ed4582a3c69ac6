fn main() {
    std::process::exit(qmusic::cli::run(std::env::args_os()));
}
