fn main() {
    std::process::exit(eam_eval::cli::run(std::env::args_os()));
}
