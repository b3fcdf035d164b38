fn main() {
    std::process::exit(qss_sim::cli::main_with_args(std::env::args_os()));
}
