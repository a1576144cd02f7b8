fn main() {
    std::process::exit(ladderlab_cli::run(std::env::args_os()));
}
