fn main() {
    std::process::exit(voxscore::cli::run(std::env::args_os()));
}
